//! Plain-text event log, one event per line:
//!
//! ```text
//! 480 ARRIVE 3 12
//! 480 DECIDE 3 12 0.041 2130
//! 490 DEPART 3 12 15
//! 490 PLATOON_FORM 3,7 12 15
//! 610 FINISH 3 15
//! ```
//!
//! DECIDE carries the solve duration in milliseconds and the predicted
//! utility in hundredths of SEK.

use std::fmt::Write as _;
use std::time::Duration;

use platoon_core::simulator::Event;
use platoon_core::{HubId, Money, Tick, TruckId};

pub fn format_event(e: &Event) -> String {
    let mut s = format!("{} {}", e.tick().0, e.kind());
    match e {
        Event::Arrive { truck, hub, .. } | Event::Finish { truck, hub, .. } => {
            let _ = write!(s, " {} {}", truck.0, hub.0);
        }
        Event::Decide {
            truck,
            hub,
            solve_duration,
            predicted_utility,
            ..
        } => {
            let ms = solve_duration.as_secs_f64() * 1000.0;
            let _ = write!(
                s,
                " {} {} {ms:.3} {}",
                truck.0,
                hub.0,
                predicted_utility.hundredths()
            );
        }
        Event::Depart {
            truck,
            hub,
            next_hub,
            ..
        } => {
            let _ = write!(s, " {} {} {}", truck.0, hub.0, next_hub.0);
        }
        Event::PlatoonForm {
            members, from, to, ..
        } => {
            let ids: Vec<String> = members.iter().map(|m| m.0.to_string()).collect();
            let _ = write!(s, " {} {} {}", ids.join(","), from.0, to.0);
        }
    }
    s
}

pub fn format_log(events: &[Event]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&format_event(e));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn num<T: std::str::FromStr>(field: Option<&str>, what: &str) -> Result<T, String> {
    let f = field.ok_or_else(|| format!("missing {what}"))?;
    f.parse().map_err(|_| format!("bad {what} {f:?}"))
}

fn parse_line(text: &str) -> Result<Event, String> {
    let mut it = text.split_ascii_whitespace();
    let tick = Tick(num(it.next(), "tick")?);
    let kind = it.next().ok_or("missing event kind")?;
    let event = match kind {
        "ARRIVE" | "FINISH" => {
            let truck = TruckId(num(it.next(), "truck")?);
            let hub = HubId(num(it.next(), "hub")?);
            if kind == "ARRIVE" {
                Event::Arrive { tick, truck, hub }
            } else {
                Event::Finish { tick, truck, hub }
            }
        }
        "DECIDE" => {
            let truck = TruckId(num(it.next(), "truck")?);
            let hub = HubId(num(it.next(), "hub")?);
            let ms: f64 = num(it.next(), "solve milliseconds")?;
            if !(ms.is_finite() && ms >= 0.0) {
                return Err(format!("bad solve milliseconds {ms}"));
            }
            let predicted_utility = Money::from_hundredths(num(it.next(), "predicted utility")?);
            Event::Decide {
                tick,
                truck,
                hub,
                solve_duration: Duration::from_secs_f64(ms / 1000.0),
                predicted_utility,
            }
        }
        "DEPART" => Event::Depart {
            tick,
            truck: TruckId(num(it.next(), "truck")?),
            hub: HubId(num(it.next(), "hub")?),
            next_hub: HubId(num(it.next(), "next hub")?),
        },
        "PLATOON_FORM" => {
            let ids = it.next().ok_or("missing platoon members")?;
            let members = ids
                .split(',')
                .map(|m| num(Some(m), "platoon member").map(TruckId))
                .collect::<Result<Vec<_>, _>>()?;
            if members.len() < 2 {
                return Err("platoon with fewer than two members".into());
            }
            Event::PlatoonForm {
                tick,
                members,
                from: HubId(num(it.next(), "hub")?),
                to: HubId(num(it.next(), "next hub")?),
            }
        }
        other => return Err(format!("unknown event kind {other:?}")),
    };
    if let Some(extra) = it.next() {
        return Err(format!("unexpected trailing field {extra:?}"));
    }
    Ok(event)
}

/// Parses a whole log. Blank lines are skipped.
pub fn parse_log(text: &str) -> Result<Vec<Event>, ParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            parse_line(l).map_err(|message| ParseError {
                line: i + 1,
                message,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_shapes() {
        let lines = [
            "480 ARRIVE 3 12",
            "480 DECIDE 3 12 0.041 2130",
            "490 DEPART 3 12 15",
            "490 PLATOON_FORM 3,7 12 15",
            "610 FINISH 3 15",
        ];
        let text = lines.join("\n") + "\n";
        let events = parse_log(&text).unwrap();
        assert_eq!(format_log(&events), text);
        assert_eq!(
            events[3],
            Event::PlatoonForm {
                tick: Tick(490),
                members: vec![TruckId(3), TruckId(7)],
                from: HubId(12),
                to: HubId(15),
            }
        );
    }

    #[test]
    fn negative_utility_and_zero_duration() {
        let e = Event::Decide {
            tick: Tick(0),
            truck: TruckId(1),
            hub: HubId(2),
            solve_duration: Duration::ZERO,
            predicted_utility: Money::from_hundredths(-5),
        };
        assert_eq!(format_event(&e), "0 DECIDE 1 2 0.000 -5");
    }

    #[test]
    fn malformed_lines_report_their_number() {
        let err = parse_log("1 ARRIVE 1 2\n\n2 WOBBLE 1 2\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(parse_log("1 ARRIVE 1").is_err());
        assert!(parse_log("1 ARRIVE 1 2 3").is_err());
        assert!(parse_log("1 PLATOON_FORM 4 1 2").is_err());
    }
}
