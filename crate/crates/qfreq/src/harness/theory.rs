//! Theory-curve tables: the upper- and lower-bound growth laws evaluated with
//! unit constants on a parameter grid, for overlaying against measured ledger
//! data. Curves are order-of-growth only; the `role` column keeps lower
//! bounds from being mistaken for measurements.

use thiserror::Error;

use crate::query::fk_cost_exponent;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TheoryError {
    #[error("unknown curve id {0:?}")]
    UnknownCurve(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveRole {
    Upper,
    Lower,
}

impl CurveRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveRole::Upper => "upper",
            CurveRole::Lower => "lower",
        }
    }
}

/// The fixed curve catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveId {
    /// √n/ε quantum queries for F₀.
    F0QueryUpper,
    /// n^{(1−1/k)(1−2^{k−2}/(2^k−1))}/ε² quantum queries for F_k.
    FkQueryUpper,
    /// The bare F_k query exponent in n.
    FkQueryExponent,
    /// √(n/ε) lower bound for F₀.
    F0QueryLower,
    /// n^{1/2−1/(2k)}/ε lower bound for F_k.
    FkQueryLower,
    /// n^{1/3} collision-problem lower bound for F_k, k > 1.
    FkQueryLowerCollision,
    /// n^{2/3} element-distinctness lower bound for F∞.
    FInftyQueryLower,
    /// 1/ε passes for streaming F₀.
    F0StreamPasses,
    /// √n passes for streaming F∞.
    FInftyStreamPasses,
    /// TS = log n lower bound, k ≠ 1.
    TsLowerLog,
    /// TS = √n lower bound, k = ∞.
    TsLowerSqrt,
    /// TS = n lower bound for exact computation, k ∉ {0,1,∞}.
    TsLowerLinear,
    /// TS = 1/ε lower bound, k ≠ 1.
    TsLowerInvEps,
}

pub const ALL_CURVES: [CurveId; 13] = [
    CurveId::F0QueryUpper,
    CurveId::FkQueryUpper,
    CurveId::FkQueryExponent,
    CurveId::F0QueryLower,
    CurveId::FkQueryLower,
    CurveId::FkQueryLowerCollision,
    CurveId::FInftyQueryLower,
    CurveId::F0StreamPasses,
    CurveId::FInftyStreamPasses,
    CurveId::TsLowerLog,
    CurveId::TsLowerSqrt,
    CurveId::TsLowerLinear,
    CurveId::TsLowerInvEps,
];

impl CurveId {
    pub fn id(&self) -> &'static str {
        match self {
            CurveId::F0QueryUpper => "f0_query_upper",
            CurveId::FkQueryUpper => "fk_query_upper",
            CurveId::FkQueryExponent => "fk_query_exponent",
            CurveId::F0QueryLower => "f0_query_lower",
            CurveId::FkQueryLower => "fk_query_lower",
            CurveId::FkQueryLowerCollision => "fk_query_lower_collision",
            CurveId::FInftyQueryLower => "finf_query_lower",
            CurveId::F0StreamPasses => "f0_stream_passes",
            CurveId::FInftyStreamPasses => "finf_stream_passes",
            CurveId::TsLowerLog => "ts_lower_log",
            CurveId::TsLowerSqrt => "ts_lower_sqrt",
            CurveId::TsLowerLinear => "ts_lower_linear",
            CurveId::TsLowerInvEps => "ts_lower_inv_eps",
        }
    }

    pub fn parse(id: &str) -> Result<Self, TheoryError> {
        ALL_CURVES
            .iter()
            .copied()
            .find(|c| c.id() == id)
            .ok_or_else(|| TheoryError::UnknownCurve(id.to_string()))
    }

    pub fn role(&self) -> CurveRole {
        match self {
            CurveId::F0QueryUpper
            | CurveId::FkQueryUpper
            | CurveId::FkQueryExponent
            | CurveId::F0StreamPasses
            | CurveId::FInftyStreamPasses => CurveRole::Upper,
            _ => CurveRole::Lower,
        }
    }

    /// Evaluates the growth law with unit constants.
    pub fn eval(&self, n: f64, k: u32, epsilon: f64) -> f64 {
        match self {
            CurveId::F0QueryUpper => n.sqrt() / epsilon,
            CurveId::FkQueryUpper => n.powf(fk_cost_exponent(k)) / (epsilon * epsilon),
            CurveId::FkQueryExponent => fk_cost_exponent(k),
            CurveId::F0QueryLower => (n / epsilon).sqrt(),
            CurveId::FkQueryLower => n.powf(0.5 - 1.0 / (2.0 * k as f64)) / epsilon,
            CurveId::FkQueryLowerCollision => n.powf(1.0 / 3.0),
            CurveId::FInftyQueryLower => n.powf(2.0 / 3.0),
            CurveId::F0StreamPasses => 1.0 / epsilon,
            CurveId::FInftyStreamPasses => n.sqrt(),
            CurveId::TsLowerLog => n.log2(),
            CurveId::TsLowerSqrt => n.sqrt(),
            CurveId::TsLowerLinear => n,
            CurveId::TsLowerInvEps => 1.0 / epsilon,
        }
    }
}

/// Evaluates curves over a grid and renders the CSV table.
pub fn theory_table(curves: &[CurveId], ns: &[u64], ks: &[u32], epsilons: &[f64]) -> String {
    let mut out = String::from("curve,role,n,k,epsilon,value\n");
    for curve in curves {
        for &n in ns {
            for &k in ks {
                for &eps in epsilons {
                    let value = curve.eval(n as f64, k, eps);
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        curve.id(),
                        curve.role().as_str(),
                        n,
                        k,
                        eps,
                        value
                    ));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_examples() {
        // √n/ε at n = 10^4, ε = 0.1
        assert_eq!(CurveId::F0QueryUpper.eval(1e4, 2, 0.1), 1000.0);
        // F_k query exponent at k = 2 is 1/3
        assert!((CurveId::FkQueryExponent.eval(1.0, 2, 1.0) - 1.0 / 3.0).abs() < 1e-12);
        // √n passes at n = 4096
        assert_eq!(CurveId::FInftyStreamPasses.eval(4096.0, 2, 1.0), 64.0);
    }

    #[test]
    fn parse_roundtrip_and_unknown() {
        for c in ALL_CURVES {
            assert_eq!(CurveId::parse(c.id()).unwrap(), c);
        }
        assert!(CurveId::parse("nope").is_err());
    }

    #[test]
    fn table_has_role_column() {
        let csv = theory_table(&[CurveId::TsLowerSqrt], &[256], &[2], &[0.5]);
        assert!(csv.contains("ts_lower_sqrt,lower,256,2,0.5,16"));
    }
}
