//! Truncated directed chains of metric spaces and colimit distances.
//!
//! Colimit distances of a directed diagram are infima over later stages of
//! image distances. Only explicitly truncated chains are represented; for a
//! truncation of an infinite chain the reported minimum is an upper bound on
//! the true colimit distance, together with the trend of the stage values.

use crate::error::{Error, Result};
use crate::space::{MetricSpace, SpaceFile};
use serde::{Deserialize, Serialize};

/// Finitely many stages with nonexpanding links between consecutive ones.
/// `links[i]` sends point indices of stage `i` to stage `i + 1`; composites
/// `f_ij` arise by chaining, so `f_ii = id` and `f_jk . f_ij = f_ik` hold by
/// construction.
#[derive(Debug, Clone)]
pub struct DirectedChain {
    stages: Vec<MetricSpace>,
    links: Vec<Vec<usize>>,
}

impl DirectedChain {
    pub fn new(stages: Vec<MetricSpace>, links: Vec<Vec<usize>>) -> Result<Self> {
        assert_eq!(
            links.len(),
            stages.len().saturating_sub(1),
            "need one link per consecutive stage pair"
        );
        for (i, link) in links.iter().enumerate() {
            let (src, dst) = (&stages[i], &stages[i + 1]);
            assert_eq!(link.len(), src.len(), "link must be total on stage {i}");
            for &t in link {
                assert!(t < dst.len(), "link target out of range at stage {i}");
            }
            for y in 0..src.len() {
                for y2 in 0..src.len() {
                    let before = src.dist(y, y2);
                    let after = dst.dist(link[y], link[y2]);
                    if after > before {
                        return Err(Error::ExpandingLink {
                            stage: i,
                            y: src.point(y).to_string(),
                            y2: src.point(y2).to_string(),
                            before,
                            after,
                        });
                    }
                }
            }
        }
        Ok(DirectedChain { stages, links })
    }

    pub fn stages(&self) -> &[MetricSpace] {
        &self.stages
    }

    pub fn stage(&self, i: usize) -> Result<&MetricSpace> {
        self.stages.get(i).ok_or(Error::StageOutOfRange {
            index: i,
            stages: self.stages.len(),
        })
    }

    /// Image of a stage-`i` point in stage `j >= i`.
    pub fn push(&self, i: usize, j: usize, mut y: usize) -> usize {
        for k in i..j {
            y = self.links[k][y];
        }
        y
    }

    /// The chain `M_n = {a, b}` with `d(a, b) = 2^-n` and identity links;
    /// its colimit is a singleton.
    pub fn halving(stages: usize) -> Self {
        let spaces: Vec<MetricSpace> = (0..stages)
            .map(|n| MetricSpace::pair("a", "b", 0.5f64.powi(n as i32)).unwrap())
            .collect();
        let links = vec![vec![0, 1]; stages.saturating_sub(1)];
        DirectedChain::new(spaces, links).expect("halving links are nonexpanding")
    }

    /// Per-stage distances `d_j(f_ij(y), f_ij(y'))` for `j = i..last`, their
    /// minimum, and whether the trend indicates collapse toward distance 0.
    pub fn colimit_distance(&self, i: usize, y: &str, y2: &str) -> Result<ColimitDistance> {
        let start = self.stage(i)?;
        let mut a = start.index_of(y)?;
        let mut b = start.index_of(y2)?;
        let mut per_stage = Vec::new();
        for j in i..self.stages.len() {
            per_stage.push(self.stages[j].dist(a, b));
            if j + 1 < self.stages.len() {
                a = self.links[j][a];
                b = self.links[j][b];
            }
        }
        let infimum = per_stage.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(ColimitDistance {
            from_stage: i,
            per_stage,
            infimum,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ColimitDistance {
    pub from_stage: usize,
    pub per_stage: Vec<f64>,
    pub infimum: f64,
}

impl ColimitDistance {
    /// "collapsing" when the truncation values head below 1e-6 for a pair
    /// that started apart, "stable" when the tail stopped moving.
    pub fn trend(&self) -> &'static str {
        let first = *self.per_stage.first().unwrap_or(&0.0);
        if self.infimum < 1e-6 && first > 0.0 {
            "collapsing toward 0"
        } else if self.per_stage.len() >= 2
            && self.per_stage[self.per_stage.len() - 1] < self.per_stage[0]
        {
            "decreasing"
        } else {
            "stable"
        }
    }
}

/// JSON form: either explicit stages with links, or a named generator.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChainFile {
    Generator {
        generator: String,
        #[serde(default)]
        stages: Option<usize>,
    },
    Explicit {
        stages: Vec<SpaceFile>,
        links: Vec<Vec<String>>,
    },
}

impl ChainFile {
    pub fn to_chain(&self, default_stages: usize) -> Result<DirectedChain> {
        match self {
            ChainFile::Generator { generator, stages } => {
                let n = stages.unwrap_or(default_stages);
                match generator.as_str() {
                    "halving" => Ok(DirectedChain::halving(n)),
                    other => Err(Error::UnknownModel(other.to_string())),
                }
            }
            ChainFile::Explicit { stages, links } => {
                let spaces: Vec<MetricSpace> =
                    stages.iter().map(|f| f.to_metric()).collect::<Result<_>>()?;
                let mut index_links = Vec::new();
                for (i, link) in links.iter().enumerate() {
                    let dst = &spaces[i + 1];
                    let mut l = Vec::new();
                    for name in link {
                        l.push(dst.index_of(name)?);
                    }
                    index_links.push(l);
                }
                DirectedChain::new(spaces, index_links)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_chain_keeps_distance() {
        let stages = vec![
            MetricSpace::pair("a", "b", 2.0).unwrap(),
            MetricSpace::pair("a", "b", 2.0).unwrap(),
            MetricSpace::pair("a", "b", 2.0).unwrap(),
        ];
        let chain = DirectedChain::new(stages, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let d = chain.colimit_distance(0, "a", "b").unwrap();
        assert_eq!(d.per_stage, vec![2.0, 2.0, 2.0]);
        assert_eq!(d.infimum, 2.0);
        assert_eq!(d.trend(), "stable");
    }

    #[test]
    fn halving_chain_collapses() {
        let chain = DirectedChain::halving(21);
        let d = chain.colimit_distance(0, "a", "b").unwrap();
        assert_eq!(d.per_stage[20], 0.5f64.powi(20));
        assert!(d.infimum < 1e-6);
        assert_eq!(d.trend(), "collapsing toward 0");
    }

    #[test]
    fn expanding_links_rejected() {
        let stages = vec![
            MetricSpace::pair("a", "b", 5.0).unwrap(),
            MetricSpace::pair("a", "b", 3.0).unwrap(),
            MetricSpace::pair("a", "b", 4.0).unwrap(),
        ];
        let err = DirectedChain::new(stages, vec![vec![0, 1], vec![0, 1]]).unwrap_err();
        assert!(matches!(err, Error::ExpandingLink { stage: 1, .. }));
    }

    #[test]
    fn stage_index_out_of_range() {
        let chain = DirectedChain::halving(3);
        assert!(chain.colimit_distance(7, "a", "b").is_err());
    }

    #[test]
    fn per_stage_values_nonincreasing() {
        let chain = DirectedChain::halving(10);
        let d = chain.colimit_distance(0, "a", "b").unwrap();
        for w in d.per_stage.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }
}
