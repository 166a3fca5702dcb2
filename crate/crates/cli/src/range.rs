//! Parameter ranges: `start:step:stop` (inclusive), `a,b,c`, or a single value.

use std::str::FromStr;

/// More points than this is almost certainly a typo in the step.
const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Range(Vec<f64>);

impl Range {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

fn parse_num(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.len() {
            1 => {
                let vals = s.split(',').map(parse_num).collect::<Result<Vec<_>, _>>()?;
                Ok(Range(vals))
            }
            3 => {
                let (a, h, b) = (parse_num(parts[0])?, parse_num(parts[1])?, parse_num(parts[2])?);
                if h == 0.0 || (b - a) * h < 0.0 {
                    return Err(format!("step {h} does not lead from {a} to {b}"));
                }
                let n = ((b - a) / h + 1e-9).floor();
                if n >= MAX_POINTS as f64 {
                    return Err(format!("range {s:?} has more than {MAX_POINTS} points"));
                }
                // a + k h rather than repeated addition, so endpoints are exact
                Ok(Range((0..=n as usize).map(|k| a + k as f64 * h).collect()))
            }
            _ => Err(format!("expected start:step:stop, got {s:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!("2.5".parse::<Range>().unwrap().values(), &[2.5]);
        assert_eq!("1,-2,3".parse::<Range>().unwrap().values(), &[1.0, -2.0, 3.0]);
        let r: Range = "30:10:200".parse().unwrap();
        assert_eq!(r.values().len(), 18);
        assert_eq!(r.values()[17], 200.0);
        let r: Range = "0:0.1:0.3".parse().unwrap();
        assert_eq!(r.values().len(), 4);
        let r: Range = "-40:20:40".parse().unwrap();
        assert_eq!(r.values(), &[-40.0, -20.0, 0.0, 20.0, 40.0]);
        let r: Range = "5:-1:3".parse().unwrap();
        assert_eq!(r.values(), &[5.0, 4.0, 3.0]);
    }

    #[test]
    fn rejects() {
        for bad in ["", "a", "1:2", "1:0:3", "3:1:1", "1:2:3:4", "nan", "0:1e-9:1e9"] {
            assert!(bad.parse::<Range>().is_err(), "{bad}");
        }
    }
}
