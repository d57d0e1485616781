//! Configuration grids for `seqsat bench`.

use anyhow::{bail, Context, Result};
use seqsat_core::{resolve_minsup, MiningConfig, Mode};

/// Cartesian product of values per axis. Optional limits use `none` for "unconstrained".
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub minsups: Vec<usize>,
    pub modes: Vec<Mode>,
    pub gaps: Vec<Option<usize>>,
    pub spans: Vec<Option<usize>>,
}

fn limit(value: &str) -> Result<Option<usize>> {
    if value == "none" {
        return Ok(None);
    }
    let n: usize = value.parse().with_context(|| format!("bad grid value {value:?}"))?;
    if n == 0 {
        bail!("grid limits must be positive");
    }
    Ok(Some(n))
}

impl Grid {
    /// Parses specs such as `gaps=1,2,4,8` or `gaps=none,2;modes=all,closed`. Axes not
    /// mentioned keep the single value from `base`.
    pub fn parse(specs: &[String], base: &MiningConfig, transactions: usize) -> Result<Grid> {
        let mut grid = Grid {
            minsups: vec![base.minsup],
            modes: vec![base.mode],
            gaps: vec![base.max_gap],
            spans: vec![base.max_span],
        };
        for axis in specs.iter().flat_map(|s| s.split(';')).map(str::trim).filter(|s| !s.is_empty()) {
            let (key, values) = axis.split_once('=').with_context(|| format!("grid axis {axis:?} lacks `=`"))?;
            let values: Vec<&str> = values.split(',').map(str::trim).filter(|v| !v.is_empty()).collect();
            if values.is_empty() {
                bail!("grid axis {key:?} has no values");
            }
            match key.trim() {
                "gaps" | "gap" => grid.gaps = values.iter().map(|v| limit(v)).collect::<Result<_>>()?,
                "spans" | "span" => grid.spans = values.iter().map(|v| limit(v)).collect::<Result<_>>()?,
                "minsups" | "minsup" => {
                    grid.minsups = values.iter().map(|v| resolve_minsup(v, transactions)).collect::<Result<_, _>>()?
                }
                "modes" | "mode" => grid.modes = values.iter().map(|v| v.parse()).collect::<Result<_, _>>()?,
                other => bail!("unknown grid axis {other:?} (expected gaps, spans, minsups or modes)"),
            }
        }
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.minsups.len() * self.modes.len() * self.gaps.len() * self.spans.len()
    }

    /// Cells in row-major order: minsup, mode, gap, span.
    pub fn configs(&self, base: &MiningConfig) -> Vec<MiningConfig> {
        let mut out = Vec::with_capacity(self.len());
        for &minsup in &self.minsups {
            for &mode in &self.modes {
                for &gap in &self.gaps {
                    for &span in &self.spans {
                        let mut config = base.clone();
                        config.minsup = minsup;
                        config.mode = mode;
                        config.max_gap = gap;
                        config.max_span = span;
                        out.push(config);
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(specs: &[&str]) -> Result<Grid> {
        let specs: Vec<String> = specs.iter().map(|s| s.to_string()).collect();
        Grid::parse(&specs, &MiningConfig::new(2, Mode::Closed), 10)
    }

    #[test]
    fn single_axis() {
        let g = parse(&["gaps=1,2,4,8"]).unwrap();
        assert_eq!(g.gaps, vec![Some(1), Some(2), Some(4), Some(8)]);
        assert_eq!(g.len(), 4);
        let configs = g.configs(&MiningConfig::new(2, Mode::Closed));
        assert_eq!(configs.iter().map(|c| c.max_gap).collect::<Vec<_>>(), g.gaps);
        assert!(configs.iter().all(|c| c.minsup == 2 && c.mode == Mode::Closed));
    }

    #[test]
    fn several_axes() {
        let g = parse(&["gaps=none,2;modes=all,maximal", "minsups=20%,3"]).unwrap();
        assert_eq!(g.gaps, vec![None, Some(2)]);
        assert_eq!(g.modes, vec![Mode::All, Mode::Maximal]);
        assert_eq!(g.minsups, vec![2, 3]);
        assert_eq!(g.len(), 8);
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(parse(&["gaps"]).is_err());
        assert!(parse(&["gaps="]).is_err());
        assert!(parse(&["gaps=0"]).is_err());
        assert!(parse(&["colors=red"]).is_err());
        assert!(parse(&["minsups=11"]).is_err());
    }
}
