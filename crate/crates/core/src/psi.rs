//! The covariance kernel ψ(a) = Cov(log₂ Z₁, log₂(Z₁ ∨ (2^a − 1) Z₂)) for
//! independent standard 1-Fréchet Z₁, Z₂.

use crate::error::{Error, Result};
use crate::frechet::frechet_log2_variance;
use crate::stream::SeededStream;
use rand::Rng;
use rand_distr::{Distribution, Open01};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

/// Monte Carlo ψ(i), i = 0..19, from 10⁷ pairs bagged 1000 times.
pub const BUILTIN_PSI: [f64; 20] = [
    3.423696, 2.211864, 1.387207, 0.846734, 0.504666, 0.294581, 0.168963, 0.095563, 0.053288, 0.029470, 0.016072,
    0.008755, 0.004756, 0.002552, 0.001405, 0.000709, 0.000335, 0.000175, 0.000097, 0.000032,
];

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Builtin,
    MonteCarlo {
        pairs: usize,
        bags: usize,
        seed: u64,
        stream: u64,
    },
    /// Loaded from a file without a recognised provenance line.
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiTable {
    values: Vec<f64>,
    provenance: Provenance,
}

pub fn builtin_psi() -> PsiTable {
    PsiTable { values: BUILTIN_PSI.to_vec(), provenance: Provenance::Builtin }
}

impl PsiTable {
    /// Validates: at least one lag, finite non-negative, strictly decreasing,
    /// and ψ(0) within 0.05 of π²/(6 ln² 2).
    pub fn new(values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Input("psi table is empty".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Input("psi values must be finite and non-negative".into()));
        }
        if let Some(w) = values.windows(2).position(|w| w[1] >= w[0]) {
            return Err(Error::Input(format!("psi values must strictly decrease (lag {})", w + 1)));
        }
        let analytic = frechet_log2_variance(1.0)?;
        if (values[0] - analytic).abs() > 0.05 {
            return Err(Error::Input(format!("psi(0) = {} is not within 0.05 of {analytic:.6}", values[0])));
        }
        Ok(Self { values, provenance })
    }

    /// ψ(a); lags beyond the table are 0.
    pub fn lookup(&self, lag: usize) -> f64 {
        self.values.get(lag).copied().unwrap_or(0.0)
    }

    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Two-column `lag,psi` CSV preceded by a provenance comment.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let prov = match &self.provenance {
            Provenance::Builtin => "builtin".to_string(),
            Provenance::MonteCarlo { pairs, bags, seed, stream } => {
                format!("montecarlo pairs={pairs} bags={bags} seed={seed} stream={stream}")
            }
            Provenance::External => "external".to_string(),
        };
        writeln!(out, "# provenance: {prov}").unwrap();
        out.push_str("lag,psi\n");
        for (lag, v) in self.values.iter().enumerate() {
            writeln!(out, "{lag},{v}").unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut provenance = Provenance::External;
        let mut values = Vec::new();
        let mut seen_header = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(p) = comment.trim().strip_prefix("provenance:") {
                    provenance = parse_provenance(p.trim());
                }
                continue;
            }
            if !seen_header && line.eq_ignore_ascii_case("lag,psi") {
                seen_header = true;
                continue;
            }
            let mut fields = line.split(',').map(str::trim);
            let (Some(lag), Some(psi), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::Input(format!("line {line_no}: expected two columns lag,psi")));
            };
            let lag: usize = lag.parse().map_err(|_| Error::Parse { line: line_no, text: lag.into() })?;
            let psi: f64 = psi.parse().map_err(|_| Error::Parse { line: line_no, text: psi.into() })?;
            if lag != values.len() {
                return Err(Error::Input(format!(
                    "line {line_no}: lags must run 0,1,2,... (expected {}, got {lag})",
                    values.len()
                )));
            }
            values.push(psi);
        }
        Self::new(values, provenance)
    }
}

fn parse_provenance(s: &str) -> Provenance {
    if s == "builtin" {
        return Provenance::Builtin;
    }
    let mut it = s.split_whitespace();
    if it.next() != Some("montecarlo") {
        return Provenance::External;
    }
    let (mut pairs, mut bags, mut seed, mut stream) = (None, None, None, Some(0));
    for kv in it {
        match kv.split_once('=') {
            Some(("pairs", v)) => pairs = v.parse().ok(),
            Some(("bags", v)) => bags = v.parse().ok(),
            Some(("seed", v)) => seed = v.parse().ok(),
            Some(("stream", v)) => stream = v.parse().ok(),
            _ => {}
        }
    }
    match (pairs, bags, seed, stream) {
        (Some(pairs), Some(bags), Some(seed), Some(stream)) => Provenance::MonteCarlo { pairs, bags, seed, stream },
        _ => Provenance::External,
    }
}

/// Minimum pairs per bag accepted by [`psi_mc`].
pub const MIN_PAIRS: usize = 10_000;

/// Lag from which [`psi_mc`] subtracts the independent `log₂ Z₂` term.
pub const CONTROL_VARIATE_LAG: usize = 4;

/// Bagged Monte Carlo estimate of ψ(a): the mean over `bags` independent sample
/// covariances, each from `pairs` i.i.d. standard 1-Fréchet pairs. Bag `b`
/// draws from `stream.substream(b)` and the average is taken in bag order.
///
/// From lag [`CONTROL_VARIATE_LAG`] on, the covariance is taken against
/// `log₂(Z₁ ∨ cZ₂) - log₂ Z₂`; the subtracted term is independent of `Z₁`, so
/// the target is unchanged, while the noise it carries (which swamps ψ at
/// large lags) is removed.
pub fn psi_mc(lag: usize, pairs: usize, bags: usize, stream: SeededStream) -> Result<f64> {
    if pairs < MIN_PAIRS {
        return Err(Error::Parameter(format!("pairs must be at least {MIN_PAIRS}, got {pairs}")));
    }
    if bags == 0 {
        return Err(Error::Parameter("bags must be at least 1".into()));
    }
    if lag > 1000 {
        return Err(Error::Parameter(format!("lag {lag} too large")));
    }
    let log2_weight = ((2f64).powi(lag as i32) - 1.0).log2();
    let control = lag >= CONTROL_VARIATE_LAG;
    let covs: Vec<f64> = (0..bags)
        .into_par_iter()
        .map(|b| bag_covariance(log2_weight, control, pairs, stream.substream(b as u64)))
        .collect();
    Ok(covs.iter().sum::<f64>() / bags as f64)
}

fn bag_covariance(log2_weight: f64, control: bool, pairs: usize, stream: SeededStream) -> f64 {
    let mut rng = stream.rng();
    let (mut sx, mut sy, mut sxy) = (0.0, 0.0, 0.0);
    for _ in 0..pairs {
        let x = log2_unit_frechet(&mut rng);
        let z2 = log2_unit_frechet(&mut rng);
        // log₂(Z₁ ∨ c Z₂) = max(log₂ Z₁, log₂ c + log₂ Z₂); c = 0 at lag 0
        let mut y = x.max(log2_weight + z2);
        if control {
            y -= z2;
        }
        sx += x;
        sy += y;
        sxy += x * y;
    }
    let n = pairs as f64;
    (sxy - sx * sy / n) / (n - 1.0)
}

#[inline]
fn log2_unit_frechet<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = Open01.sample(rng);
    -(-u.ln()).log2()
}

/// Regenerates ψ(0..=max_lag) by [`psi_mc`], each lag on its own substream.
pub fn psi_table_mc(max_lag: usize, pairs: usize, bags: usize, stream: SeededStream) -> Result<PsiTable> {
    let values =
        (0..=max_lag).map(|a| psi_mc(a, pairs, bags, stream.substream(a as u64))).collect::<Result<Vec<_>>>()?;
    PsiTable::new(values, Provenance::MonteCarlo { pairs, bags, seed: stream.seed, stream: stream.stream })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_lookup() {
        let t = builtin_psi();
        assert_eq!(t.lookup(0), 3.423696);
        assert_eq!(t.lookup(19), 0.000032);
        assert_eq!(t.lookup(25), 0.0);
        assert_eq!(t.max_lag(), 19);
        assert_eq!(t.provenance(), &Provenance::Builtin);
    }

    #[test]
    fn csv_round_trip() {
        let t = builtin_psi();
        let back = PsiTable::from_csv(&t.to_csv()).unwrap();
        assert_eq!(back, t);
        let mc =
            PsiTable::new(vec![3.42, 2.2, 1.3], Provenance::MonteCarlo { pairs: 10_000, bags: 2, seed: 9, stream: 4 })
                .unwrap();
        assert_eq!(PsiTable::from_csv(&mc.to_csv()).unwrap(), mc);
    }

    #[test]
    fn rejects_corrupt_tables() {
        assert!(PsiTable::new(vec![], Provenance::External).is_err());
        assert!(PsiTable::new(vec![3.42, 3.5], Provenance::External).is_err());
        assert!(PsiTable::new(vec![3.0, 2.0], Provenance::External).is_err());
        assert!(PsiTable::from_csv("lag,psi\n0,3.42\n2,1.0\n").is_err());
        assert!(matches!(PsiTable::from_csv("0,abc\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn lag_zero_is_the_log_variance() {
        let v = psi_mc(0, 200_000, 2, SeededStream::new(3, 0)).unwrap();
        assert!((v - 3.42372).abs() < 0.06, "{v}");
    }

    #[test]
    fn high_lags_resolve_the_tail() {
        // plain covariance noise at 1e5 pairs is ~1e-2, far above ψ(16)
        let v: Vec<f64> = (0..6).map(|s| psi_mc(16, 100_000, 1, SeededStream::new(5, s)).unwrap()).collect();
        let m = v.iter().sum::<f64>() / 6.0;
        let sd = (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / 5.0).sqrt();
        assert!(sd < 3e-3, "{v:?}");
        assert!((m - builtin_psi().lookup(16)).abs() < 3e-3, "{m}");
    }

    #[test]
    fn deterministic_and_validated() {
        let s = SeededStream::new(1, 2);
        assert_eq!(psi_mc(3, 10_000, 3, s).unwrap(), psi_mc(3, 10_000, 3, s).unwrap());
        assert!(psi_mc(3, 9_999, 3, s).is_err());
        assert!(psi_mc(3, 10_000, 0, s).is_err());
    }
}
