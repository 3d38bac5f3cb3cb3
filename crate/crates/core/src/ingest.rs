//! Sliding-window correlation networks built from price panels.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::netstats::pearson;

/// Per-asset return series, all of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesPanel {
    assets: Vec<String>,
    returns: Vec<Vec<f64>>,
}

impl TimeSeriesPanel {
    pub fn from_returns(assets: Vec<String>, returns: Vec<Vec<f64>>) -> Result<Self> {
        if assets.len() != returns.len() {
            return Err(Error::LengthMismatch(assets.len(), returns.len()));
        }
        if let Some(first) = returns.first() {
            for (i, r) in returns.iter().enumerate() {
                if r.len() != first.len() {
                    return Err(Error::RaggedRows {
                        row: i,
                        found: r.len(),
                        expected: first.len(),
                    });
                }
            }
        }
        Ok(TimeSeriesPanel { assets, returns })
    }

    /// Log-returns of day-major prices (`prices[day][asset]`).
    pub fn from_prices(assets: Vec<String>, prices: &[Vec<f64>]) -> Result<Self> {
        let a = assets.len();
        for (row, p) in prices.iter().enumerate() {
            if p.len() != a {
                return Err(Error::RaggedRows {
                    row,
                    found: p.len(),
                    expected: a,
                });
            }
            for (asset, &value) in p.iter().enumerate() {
                if !(value > 0.0 && value.is_finite()) {
                    return Err(Error::NonPositivePrice {
                        asset: assets[asset].clone(),
                        row,
                        value,
                    });
                }
            }
        }
        let returns = (0..a)
            .map(|j| prices.windows(2).map(|w| (w[1][j] / w[0][j]).ln()).collect())
            .collect();
        Ok(TimeSeriesPanel { assets, returns })
    }

    pub fn assets(&self) -> &[String] {
        &self.assets
    }

    pub fn n_assets(&self) -> usize {
        self.assets.len()
    }

    /// Number of return periods.
    pub fn periods(&self) -> usize {
        self.returns.first().map_or(0, Vec::len)
    }

    pub fn returns(&self, asset: usize) -> &[f64] {
        &self.returns[asset]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrNetParams {
    pub window: usize,
    /// Edges require `|r|` strictly above this value.
    pub threshold: f64,
}

impl CorrNetParams {
    pub const DEFAULT_WINDOW: usize = 28;

    pub fn new(window: usize, threshold: f64) -> Result<Self> {
        let p = CorrNetParams { window, threshold };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window < 3 {
            return Err(Error::BadParam(format!("window must be at least 3, got {}", self.window)));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::BadParam(format!("threshold must lie in [0, 1], got {}", self.threshold)));
        }
        Ok(())
    }
}

/// Reads a CSV with a header of asset labels and one row of prices per day.
/// A leading column named `date` is ignored.
pub fn load_price_csv(path: &Path) -> Result<TimeSeriesPanel> {
    let file = std::fs::File::open(path)?;
    read_price_csv(file)
}

pub fn read_price_csv<R: std::io::Read>(reader: R) -> Result<TimeSeriesPanel> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::MalformedCsv(e.to_string()))?.clone();
    let skip = usize::from(header.get(0).is_some_and(|h| h.eq_ignore_ascii_case("date")));
    let assets: Vec<String> = header.iter().skip(skip).map(str::to_owned).collect();
    if assets.is_empty() {
        return Err(Error::MalformedCsv("header lists no assets".into()));
    }
    let mut prices = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::MalformedCsv(e.to_string()))?;
        if rec.len() != header.len() {
            return Err(Error::RaggedRows {
                row,
                found: rec.len().saturating_sub(skip),
                expected: assets.len(),
            });
        }
        let vals = rec
            .iter()
            .skip(skip)
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::MalformedCsv(format!("row {row}: cannot parse {s:?} as a price")))
            })
            .collect::<Result<Vec<f64>>>()?;
        prices.push(vals);
    }
    TimeSeriesPanel::from_prices(assets, &prices)
}

/// Network over the return periods `(end - window, end]` (1-based), one node
/// per asset. Assets constant over the window stay isolated.
pub fn window_correlation_network(panel: &TimeSeriesPanel, params: &CorrNetParams, end: usize) -> Result<Graph> {
    params.validate()?;
    let w = params.window;
    if end < w || end > panel.periods() {
        return Err(Error::WindowOutOfRange {
            end,
            window: w,
            available: panel.periods(),
        });
    }
    let a = panel.n_assets();
    let mut edges = Vec::new();
    for i in 0..a {
        let ri = &panel.returns(i)[end - w..end];
        for j in i + 1..a {
            let rj = &panel.returns(j)[end - w..end];
            match pearson(ri, rj) {
                Ok(r) if r.abs() > params.threshold => edges.push((i, j)),
                Ok(_) | Err(Error::ZeroVariance) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Graph::from_edge_list(a, &edges)
}

/// Window end indices covered by [`network_sequence`], in order.
pub fn window_ends(panel: &TimeSeriesPanel, params: &CorrNetParams) -> Result<std::ops::RangeInclusive<usize>> {
    if panel.periods() < params.window {
        return Err(Error::TooShort {
            periods: panel.periods(),
            window: params.window,
        });
    }
    Ok(params.window..=panel.periods())
}

/// One network per window end; `periods - window + 1` networks in total.
pub fn network_sequence(panel: &TimeSeriesPanel, params: &CorrNetParams) -> Result<Vec<Graph>> {
    params.validate()?;
    window_ends(panel, params)?
        .map(|t| window_correlation_network(panel, params, t))
        .collect()
}

/// Whether the non-isolated part of `g` is connected and has exactly `n_required` nodes.
pub fn is_connected_fullsize(g: &Graph, n_required: usize) -> bool {
    if g.non_isolated_count() != n_required {
        return false;
    }
    let Some(start) = (0..g.n()).find(|&u| g.degree(u) > 0) else {
        return n_required == 0;
    };
    g.bfs_distances(start).iter().filter(|d| d.is_some()).count() == n_required
}

pub fn filter_connected_fullsize(graphs: Vec<Graph>, n_required: usize) -> Vec<Graph> {
    graphs.into_iter().filter(|g| is_connected_fullsize(g, n_required)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, stream};
    use proptest::prelude::*;
    use rand::Rng;

    fn labels(a: usize) -> Vec<String> {
        (0..a).map(|i| format!("A{i}")).collect()
    }

    fn noise_panel(a: usize, t: usize, seed: u64) -> TimeSeriesPanel {
        let mut rng = stream(seed, 0);
        let returns = (0..a).map(|_| (0..t).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        TimeSeriesPanel::from_returns(labels(a), returns).unwrap()
    }

    #[test]
    fn csv_returns() {
        let p = read_price_csv("x,y\n5,2\n5,2\n5,2\n".as_bytes()).unwrap();
        assert_eq!(p.periods(), 2);
        assert!(p.returns(0).iter().chain(p.returns(1)).all(|&r| r == 0.0));

        let e = std::f64::consts::E;
        let text = format!("date,a\n2020-01-01,1\n2020-01-02,{e}\n2020-01-03,{}\n", e * e);
        let p = read_price_csv(text.as_bytes()).unwrap();
        assert_eq!(p.assets(), ["a"]);
        for r in p.returns(0) {
            assert!((r - 1.0).abs() < 1e-15);
        }

        let mut text = String::from("a,b\n");
        for d in 0..30 {
            text.push_str(&format!("{},{}\n", 1.0 + d as f64, 2.0));
        }
        assert_eq!(read_price_csv(text.as_bytes()).unwrap().periods(), 29);
    }

    #[test]
    fn csv_errors() {
        assert_eq!(
            read_price_csv("a,b\n1,2\n1,0\n".as_bytes()),
            Err(Error::NonPositivePrice {
                asset: "b".into(),
                row: 1,
                value: 0.0
            })
        );
        assert!(matches!(read_price_csv("a,b\n1,2\n1\n".as_bytes()), Err(Error::RaggedRows { row: 1, .. })));
        assert!(matches!(read_price_csv("a,b\n1,x\n".as_bytes()), Err(Error::MalformedCsv(_))));
    }

    #[test]
    fn sequence_lengths() {
        let params = CorrNetParams::new(28, 0.5).unwrap();
        for (prices, want) in [(30usize, Some(2usize)), (29, Some(1)), (28, None)] {
            let panel = noise_panel(4, prices - 1, 1);
            match want {
                Some(k) => assert_eq!(network_sequence(&panel, &params).unwrap().len(), k),
                None => assert_eq!(
                    network_sequence(&panel, &params),
                    Err(Error::TooShort { periods: 27, window: 28 })
                ),
            }
        }
        let panel = noise_panel(4, 5499, 1);
        assert_eq!(window_ends(&panel, &params).unwrap().count(), 5472);
        assert!(matches!(
            window_correlation_network(&noise_panel(3, 40, 0), &params, 27),
            Err(Error::WindowOutOfRange { .. })
        ));
    }

    #[test]
    fn perfect_correlations_connect() {
        let base = noise_panel(1, 40, 3).returns(0).to_vec();
        let neg: Vec<f64> = base.iter().map(|x| -x).collect();
        let flat = vec![0.0; 40];
        let panel = TimeSeriesPanel::from_returns(labels(4), vec![base.clone(), base, neg, flat]).unwrap();
        for xi in [0.0, 0.5, 0.999] {
            let g = window_correlation_network(&panel, &CorrNetParams::new(28, xi).unwrap(), 35).unwrap();
            assert!(g.has_edge(0, 1) && g.has_edge(0, 2) && g.has_edge(1, 2));
            assert_eq!(g.degree(3), 0);
        }
    }

    #[test]
    fn white_noise_rarely_connects_at_high_threshold() {
        let params = CorrNetParams::new(28, 0.99).unwrap();
        let total: usize = (0..100)
            .map(|s| window_correlation_network(&noise_panel(10, 28, s), &params, 28).unwrap().m())
            .sum();
        assert!((total as f64 / 100.0) < 1.0);
    }

    #[test]
    fn filtering() {
        assert_eq!(filter_connected_fullsize(vec![complete_graph(4)], 4).len(), 1);
        let two = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(filter_connected_fullsize(vec![two], 4).is_empty());
        assert!(filter_connected_fullsize(vec![], 3).is_empty());
        let partial = Graph::from_edge_list(4, &[(0, 1), (1, 2)]).unwrap();
        assert!(filter_connected_fullsize(vec![partial.clone()], 4).is_empty());
        assert_eq!(filter_connected_fullsize(vec![partial], 3).len(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn affine_rescaling_invariant(seed in any::<u64>(), asset in 0usize..6, a in 0.01f64..100.0, b in -5.0f64..5.0, xi in 0.0f64..0.9) {
            let panel = noise_panel(6, 40, seed);
            let mut series: Vec<Vec<f64>> = (0..6).map(|i| panel.returns(i).to_vec()).collect();
            series[asset] = series[asset].iter().map(|r| a * r + b).collect();
            let scaled = TimeSeriesPanel::from_returns(labels(6), series).unwrap();
            let params = CorrNetParams::new(28, xi).unwrap();
            for t in [28, 34, 40] {
                let g = window_correlation_network(&panel, &params, t).unwrap();
                let h = window_correlation_network(&scaled, &params, t).unwrap();
                // Pairs sitting on the threshold may flip from rounding alone.
                for (i, j) in g.edges().chain(h.edges()) {
                    if g.has_edge(i, j) != h.has_edge(i, j) {
                        let r = pearson(&panel.returns(i)[t - 28..t], &panel.returns(j)[t - 28..t]).unwrap();
                        prop_assert!((r.abs() - xi).abs() < 1e-9);
                    }
                }
            }
        }

        #[test]
        fn sequence_matches_windows(seed in any::<u64>(), t in 28usize..40) {
            let panel = noise_panel(5, t, seed);
            let params = CorrNetParams::new(28, 0.2).unwrap();
            let seq = network_sequence(&panel, &params).unwrap();
            prop_assert_eq!(seq.len(), t - 28 + 1);
            for (k, g) in seq.iter().enumerate() {
                prop_assert_eq!(g, &window_correlation_network(&panel, &params, 28 + k).unwrap());
            }
        }
    }
}
