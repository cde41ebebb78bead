//! Plain-text field snapshots.
//!
//! ```text
//! # optional comment lines
//! <L> <N>
//! 0 <re> <im>
//! 1 <re> <im>
//! ...
//! ```
//!
//! One line per retained mode, in order. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{HardyError, Result};
use crate::field::SpectralField;
use crate::grid::FrequencyGrid;

/// Largest accepted `N`; guards allocation on hostile headers.
pub const MAX_POINTS: usize = 1 << 24;

pub fn write_snapshot(u: &SpectralField, comments: &[String]) -> String {
    let g = u.grid();
    let mut s = String::with_capacity(48 * g.modes() + 64);
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(s, "# {line}");
        }
    }
    let _ = writeln!(s, "{:?} {}", g.length(), g.num_points());
    for (k, a) in u.amplitudes().iter().enumerate() {
        let _ = writeln!(s, "{k} {:?} {:?}", a.re, a.im);
    }
    s
}

fn parse_err(line: usize, msg: impl Into<String>) -> HardyError {
    HardyError::Parse { line, msg: msg.into() }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok.parse().map_err(|_| parse_err(line, format!("bad number `{tok}`")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_err(line, format!("non-finite number `{tok}`")))
    }
}

pub fn read_snapshot(text: &str) -> Result<SpectralField> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "missing header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(parse_err(hl, "header must be `L N`"));
    }
    let l = parse_f64(toks[0], hl)?;
    let n: usize = toks[1].parse().map_err(|_| parse_err(hl, format!("bad point count `{}`", toks[1])))?;
    if n > MAX_POINTS {
        return Err(parse_err(hl, format!("point count {n} exceeds {MAX_POINTS}")));
    }
    let grid = FrequencyGrid::new(l, n).map_err(|e| parse_err(hl, e.to_string()))?;

    let mut amps = Vec::with_capacity(grid.modes());
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(parse_err(ln, "mode line must be `k re im`"));
        }
        let k: usize = toks[0].parse().map_err(|_| parse_err(ln, format!("bad mode index `{}`", toks[0])))?;
        if k != amps.len() {
            return Err(parse_err(ln, format!("expected mode {}, got {k}", amps.len())));
        }
        if k >= grid.modes() {
            return Err(parse_err(ln, format!("mode {k} beyond the {} retained modes", grid.modes())));
        }
        amps.push(Complex64::new(parse_f64(toks[1], ln)?, parse_f64(toks[2], ln)?));
    }
    if amps.len() != grid.modes() {
        return Err(parse_err(0, format!("expected {} modes, found {}", grid.modes(), amps.len())));
    }
    SpectralField::new(grid, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roundtrip_is_exact() {
        let g = FrequencyGrid::new(12.5, 32).unwrap();
        let u = SpectralField::random_band_limited(g, 16, &mut ChaCha8Rng::seed_from_u64(11));
        let text = write_snapshot(&u, &["run abc".to_string()]);
        assert!(text.starts_with("# run abc\n12.5 32\n0 "));
        assert_eq!(read_snapshot(&text).unwrap(), u);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(read_snapshot("").is_err());
        assert!(read_snapshot("1.0").is_err());
        assert!(read_snapshot("1.0 3\n0 0 0\n").is_err());
        assert!(read_snapshot("1.0 4\n0 0 0\n").is_err());
        assert!(read_snapshot("1.0 4\n0 0 0\n2 0 0\n").is_err());
        assert!(read_snapshot("1.0 4\n0 0 0\n1 0 nan\n").is_err());
        assert!(read_snapshot("1.0 4\n0 0 0\n1 0 0\n2 0 0\n").is_err());
        assert!(read_snapshot("1.0 99999999999\n").is_err());
        assert!(read_snapshot("-1.0 4\n0 0 0\n1 0 0\n").is_err());
    }

    #[test]
    fn ignores_comments_and_blank_lines() {
        let u = read_snapshot("# hi\n\n2 4\n0 1 0\n# mid\n1 0 1\n").unwrap();
        assert_eq!(u.amplitudes(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
    }
}
