//! Closed-form Turán numbers and bounds for disjoint paths and forests.
//!
//! Every formula returns a [`FormulaResult`] instead of refusing to answer
//! outside the range where it is proved; `in_proved_range` says whether the
//! value is a theorem at this `n`.

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::Graph;
use crate::treelab::{self, TreeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("hypothesis violated: {0}")]
    Domain(String),
    #[error("arithmetic overflow evaluating {0}")]
    Overflow(&'static str),
    #[error(transparent)]
    Forest(#[from] TreeError),
}

fn domain(msg: impl Into<String>) -> FormulaError {
    FormulaError::Domain(msg.into())
}

/// What kind of statement the value is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// The Turán number itself (inside the proved range).
    Exact,
    /// An upper bound on the Turán number.
    Upper,
    /// A lower bound realised by a construction.
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaResult {
    /// `floor(exact_rational)`.
    pub value: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub exact_rational: Ratio<i128>,
    pub kind: BoundKind,
    /// The value is a theorem at this `n`.
    pub in_proved_range: bool,
    /// Outside the proved range, but inside a range where the value is
    /// conjectured to be exact.
    pub conjectured: bool,
    pub conditional_on_erdos_sos: bool,
    /// Threshold on `n` above which the value is proved, when one applies.
    pub threshold: Option<u128>,
    pub citation: &'static str,
}

fn ser_ratio<S: Serializer>(r: &Ratio<i128>, s: S) -> Result<S::Ok, S::Error> {
    if *r.denom() == 1 {
        s.serialize_str(&r.numer().to_string())
    } else {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }
}

impl FormulaResult {
    fn integral(value: u64, kind: BoundKind, citation: &'static str) -> Self {
        FormulaResult {
            value,
            exact_rational: Ratio::from_integer(value as i128),
            kind,
            in_proved_range: true,
            conjectured: false,
            conditional_on_erdos_sos: false,
            threshold: None,
            citation,
        }
    }
}

pub const CITE_P3_SINGLE: &str = "ex(n,P3) <= floor(n/2) (matching lemma)";
pub const CITE_ERDOS_GALLAI: &str = "Erdos-Gallai: ex(n,Pl) <= (l-2)n/2";
pub const CITE_K_P3: &str = "ex(n,k*P3) for n >= 7k";
pub const CITE_GORGOL: &str = "Gorgol lower bound for ex(n,k*P3)";
pub const CITE_K_PL: &str = "ex(n,k*Pl) for l >= 4";
pub const CITE_FOREST: &str = "ex(n,H) for equibipartite forests H, assuming Erdos-Sos (approximate threshold as displayed)";

/// `C(a, 2)`.
pub fn choose2(a: u64) -> u64 {
    a * a.saturating_sub(1) / 2
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

struct Checked(Option<u64>);

impl Checked {
    fn new(v: u64) -> Self {
        Checked(Some(v))
    }
    fn add(self, v: u64) -> Self {
        Checked(self.0.and_then(|a| a.checked_add(v)))
    }
    fn mul_add(self, a: u64, b: u64) -> Self {
        Checked(self.0.and_then(|acc| a.checked_mul(b).and_then(|p| acc.checked_add(p))))
    }
    fn get(self, what: &'static str) -> Result<u64, FormulaError> {
        self.0.ok_or(FormulaError::Overflow(what))
    }
}

/// `ex(n, P3) = floor(n/2)`: a `P3`-free graph is a matching.
pub fn ex_p3_single(n: u64) -> FormulaResult {
    FormulaResult::integral(n / 2, BoundKind::Exact, CITE_P3_SINGLE)
}

/// Erdős–Gallai upper bound `(l-2) n / 2` on `ex(n, P_l)`.
pub fn erdos_gallai_bound(n: u64, l: u64) -> Result<FormulaResult, FormulaError> {
    if l < 2 {
        return Err(domain("Erdos-Gallai bound needs l >= 2"));
    }
    let num = (l - 2) as i128 * n as i128;
    let exact = Ratio::new(num, 2);
    Ok(FormulaResult {
        value: (num / 2) as u64,
        exact_rational: exact,
        kind: BoundKind::Upper,
        in_proved_range: true,
        conjectured: false,
        conditional_on_erdos_sos: false,
        threshold: None,
        citation: CITE_ERDOS_GALLAI,
    })
}

/// `C(k-1,2) + (n-k+1)(k-1) + floor((n-k+1)/2)`, the edge count of
/// `K_{k-1} + M_{n-k+1}`.
fn k_p3_expression(n: u64, k: u64) -> Result<u64, FormulaError> {
    let rest = n - k + 1;
    Checked::new(choose2(k - 1))
        .mul_add(rest, k - 1)
        .add(rest / 2)
        .get("ex(n,k*P3)")
}

/// `ex(n, k·P3)`, proved for `n >= 7k` (and for every `n` when `k = 1`).
pub fn ex_k_p3(n: u64, k: u64) -> Result<FormulaResult, FormulaError> {
    if k == 0 {
        return Err(domain("k*P3 needs k >= 1"));
    }
    let need = k.checked_mul(3).ok_or(FormulaError::Overflow("3k"))?;
    if n < need {
        return Err(domain(format!("k*P3 does not fit: n = {n} < 3k = {need}")));
    }
    let value = k_p3_expression(n, k)?;
    let threshold = 7 * k as u128;
    let in_proved_range = k == 1 || n as u128 >= threshold;
    let conjectured = !in_proved_range && n + 1 >= 5 * k;
    Ok(FormulaResult {
        value,
        exact_rational: Ratio::from_integer(value as i128),
        kind: BoundKind::Exact,
        in_proved_range,
        conjectured,
        conditional_on_erdos_sos: false,
        threshold: Some(if k == 1 { 0 } else { threshold }),
        citation: CITE_K_P3,
    })
}

/// Gorgol's piecewise lower bound on `ex(n, k·P3)`:
/// `C(3k-1,2) + floor((n-3k+1)/2)` for `3k <= n < 5k-1`, and the `K_{k-1} +
/// M_{n-k+1}` count for `n >= 5k-1`.
pub fn gorgol_lower_p3(n: u64, k: u64) -> Result<FormulaResult, FormulaError> {
    if k == 0 {
        return Err(domain("k*P3 needs k >= 1"));
    }
    if n < 3 * k {
        return Err(domain(format!("k*P3 does not fit: n = {n} < 3k = {}", 3 * k)));
    }
    let value = if n + 1 < 5 * k {
        choose2(3 * k - 1) + (n - 3 * k).div_ceil(2)
    } else {
        k_p3_expression(n, k)?
    };
    Ok(FormulaResult::integral(value, BoundKind::Lower, CITE_GORGOL))
}

/// `ex(n, k·P_l)` for `k >= 2`, `l >= 4`:
/// `C(k⌊l/2⌋-1, 2) + (k⌊l/2⌋-1)(n-k⌊l/2⌋+1) + c_l`, with `c_l = 1` for odd `l`.
pub fn ex_k_pl(n: u64, k: u64, l: u64) -> Result<FormulaResult, FormulaError> {
    if k < 2 {
        return Err(domain(
            "k*Pl formula needs k >= 2; use ex_k_p3 / erdos_gallai_bound for a single path",
        ));
    }
    if l < 4 {
        return Err(domain("k*Pl formula needs l >= 4; use ex_k_p3 for P3"));
    }
    let half = l / 2;
    let t = k.checked_mul(half).ok_or(FormulaError::Overflow("k*floor(l/2)"))? - 1;
    let c_l = l % 2;
    // With n <= t the join term vanishes; the count is then C(t,2) + c_l.
    let cross = n.saturating_sub(t);
    let value = Checked::new(choose2(t))
        .mul_add(t, cross)
        .add(c_l)
        .get("ex(n,k*Pl)")?;
    let threshold = (2 * l as u128).saturating_add(
        (2 * k as u128 * l as u128)
            .saturating_mul(l.div_ceil(2) as u128 + 1)
            .saturating_mul(binomial(l, half)),
    );
    Ok(FormulaResult {
        value,
        exact_rational: Ratio::from_integer(value as i128),
        kind: BoundKind::Exact,
        in_proved_range: n as u128 >= threshold,
        conjectured: false,
        conditional_on_erdos_sos: false,
        threshold: Some(threshold),
        citation: CITE_K_PL,
    })
}

/// `ex(n, H)` for an equibipartite forest `H` on `2l` vertices with at least
/// two components, assuming the Erdős–Sós conjecture:
/// `C(l-1,2) + (l-1)(n-l+1)` when `H` has a perfect matching, else
/// `(l-1)(n-l+1)`.
pub fn ex_equibipartite_forest(n: u64, h: &Graph) -> Result<FormulaResult, FormulaError> {
    let info = treelab::validate_forest(h)?;
    let l = info.l as u64;
    let base = l - 1;
    let cross = n.saturating_sub(base);
    let mut acc = Checked::new(0).mul_add(base, cross);
    if info.has_perfect_matching {
        acc = acc.add(choose2(base));
    }
    let value = acc.get("ex(n,H)")?;
    let l5 = (l as u128).saturating_pow(5);
    let threshold = (3 * (l as u128) * (l as u128))
        .saturating_add(32u128.saturating_mul(l5).saturating_mul(binomial(2 * l, l)));
    Ok(FormulaResult {
        value,
        exact_rational: Ratio::from_integer(value as i128),
        kind: BoundKind::Exact,
        in_proved_range: n as u128 >= threshold,
        conjectured: false,
        conditional_on_erdos_sos: true,
        threshold: Some(threshold),
        citation: CITE_FOREST,
    })
}

/// Guaranteed codegree from the shared-neighbourhood lemma: if `G` (on `n`
/// vertices, `m` edges) contains no `F1 ∪ F2`, every copy of `F1` (on `r`
/// vertices) has `t` vertices whose common neighbourhood has size at least
/// `((m' - (n-r)(t-1)) / (r-t+1)) / C(r,t)`, where
/// `m' = m - ex(n-r, F2) - C(r,2)`. The result may be nonpositive.
pub fn badlemma_bound(n: u64, m: u64, r: u64, t: u64, ex_f2: u64) -> Result<Ratio<i128>, FormulaError> {
    if !(1 <= t && t <= r && r <= n) {
        return Err(domain(format!("need 1 <= t <= r <= n, got t={t}, r={r}, n={n}")));
    }
    let m_prime = m as i128 - ex_f2 as i128 - choose2(r) as i128;
    let numer = m_prime - (n - r) as i128 * (t - 1) as i128;
    let subsets = binomial(r, t);
    let subsets = i128::try_from(subsets).map_err(|_| FormulaError::Overflow("C(r,t)"))?;
    let denom = (r - t + 1) as i128 * subsets;
    Ok(Ratio::new(numer, denom))
}

/// Edge counts of the two generic constructions avoiding `k` disjoint copies
/// of a connected `v`-vertex graph `G`:
/// `ex(n-kv+1, G) + C(kv-1, 2)` (union with a clique) and
/// `ex(n-k+1, G) + C(k-1, 2) + (k-1)(n-k+1)` (join with a clique).
pub fn gorgol_generic_lower(
    n: u64,
    k: u64,
    v: u64,
    ex_g: impl Fn(u64) -> u64,
) -> Result<(u64, u64), FormulaError> {
    if k == 0 || v == 0 {
        return Err(domain("need k >= 1 and v >= 1"));
    }
    let kv = k.checked_mul(v).ok_or(FormulaError::Overflow("kv"))?;
    if n < kv {
        return Err(domain(format!("need n >= kv, got n = {n} < {kv}")));
    }
    let union = Checked::new(ex_g(n - kv + 1)).add(choose2(kv - 1)).get("union construction")?;
    let rest = n - k + 1;
    let join = Checked::new(ex_g(rest))
        .add(choose2(k - 1))
        .mul_add(k - 1, rest)
        .get("join construction")?;
    Ok((union, join))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{disjoint_union, double_star, matching, path};

    #[test]
    fn single_p3() {
        assert_eq!(ex_p3_single(5).value, 2);
        assert_eq!(ex_p3_single(0).value, 0);
        assert_eq!(ex_p3_single(9).value, 4);
    }

    #[test]
    fn erdos_gallai_values() {
        assert_eq!(erdos_gallai_bound(10, 6).unwrap().value, 20);
        assert_eq!(erdos_gallai_bound(5, 6).unwrap().value, 10);
        let r = erdos_gallai_bound(7, 3).unwrap();
        assert_eq!(r.value, 3);
        assert_eq!(r.exact_rational, Ratio::new(7, 2));
        assert_eq!(r.kind, BoundKind::Upper);
        assert!(erdos_gallai_bound(7, 1).is_err());
    }

    #[test]
    fn k_p3_values() {
        let r = ex_k_p3(14, 2).unwrap();
        assert_eq!(r.value, 19);
        assert!(r.in_proved_range);
        assert_eq!(ex_k_p3(7, 1).unwrap().value, 3);
        let r = ex_k_p3(9, 3).unwrap();
        assert!(!r.in_proved_range);
        assert!(!r.conjectured);
        assert!(ex_k_p3(12, 2).unwrap().conjectured);
        assert!(matches!(ex_k_p3(5, 2), Err(FormulaError::Domain(_))));
    }

    #[test]
    fn gorgol_values() {
        assert_eq!(gorgol_lower_p3(6, 2).unwrap().value, 10);
        assert_eq!(gorgol_lower_p3(9, 2).unwrap().value, 12);
        assert!(gorgol_lower_p3(5, 2).is_err());
    }

    #[test]
    fn k_pl_values() {
        let r = ex_k_pl(300, 2, 4).unwrap();
        assert_eq!(r.value, 894);
        assert_eq!(r.threshold, Some(296));
        assert!(r.in_proved_range);
        assert_eq!(ex_k_pl(1000, 2, 5).unwrap().value, 2995);
        let r = ex_k_pl(8, 2, 4).unwrap();
        assert_eq!(r.value, 18);
        assert!(!r.in_proved_range);
        assert!(ex_k_pl(100, 1, 4).is_err());
        assert!(ex_k_pl(100, 2, 3).is_err());
    }

    #[test]
    fn forest_values() {
        let two_p2 = matching(4).unwrap();
        let r = ex_equibipartite_forest(100, &two_p2).unwrap();
        assert_eq!(r.value, 99);
        assert!(r.conditional_on_erdos_sos);
        let h = disjoint_union(&path(2).unwrap(), &double_star(2, 2).unwrap()).unwrap();
        assert_eq!(ex_equibipartite_forest(100, &h).unwrap().value, 291);
        assert!(ex_equibipartite_forest(10, &path(6).unwrap()).is_err());
    }

    #[test]
    fn badlemma_values() {
        assert_eq!(badlemma_bound(20, 54, 4, 2, 16).unwrap(), Ratio::new(8, 9));
        // t = 1: m' / r / C(r,1)
        let b = badlemma_bound(20, 54, 4, 1, 16).unwrap();
        assert_eq!(b, Ratio::new(32, 16));
        assert_eq!(badlemma_bound(3, 0, 3, 2, 0).unwrap(), Ratio::new(-3, 6));
        assert!(badlemma_bound(3, 0, 4, 2, 0).is_err());
    }

    #[test]
    fn generic_gorgol() {
        let ex = |n: u64| ex_p3_single(n).value;
        assert_eq!(gorgol_generic_lower(6, 2, 3, ex).unwrap().0, 10);
        let (a, b) = gorgol_generic_lower(9, 2, 3, ex).unwrap();
        assert_eq!(b, 12);
        assert_eq!(b, gorgol_lower_p3(9, 2).unwrap().value);
        assert_eq!(a, ex(4) + 10);
        let (a, b) = gorgol_generic_lower(8, 1, 3, ex).unwrap();
        assert_eq!((a, b), (ex(8), ex(8)));
        assert!(gorgol_generic_lower(5, 2, 3, ex).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(3, 5), 0);
    }
}
