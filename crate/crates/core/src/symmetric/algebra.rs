use std::collections::BTreeMap;
use std::fmt;

use crate::error::{check_cap, Error, Result};
use crate::exactmath::RationalFunction;

use super::perm::{all_permutations, Permutation};

/// Largest degree for symbolic group-algebra work (`7! = 5040` basis elements).
pub const MAX_SYMBOLIC_DEGREE: usize = 7;

/// Finitely supported element `Σ c_σ λ_σ` of `Q(n)[S_k]`.
///
/// Multiplication follows `λ_σ λ_τ = λ_{σ∘τ}`. Zero coefficients are never
/// stored, so structural equality is algebraic equality.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    degree: usize,
    coeffs: BTreeMap<Permutation, RationalFunction>,
}

impl GroupAlgebraElement {
    pub fn zero(degree: usize) -> Self {
        GroupAlgebraElement {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(sigma: Permutation) -> Self {
        Self::term(sigma, RationalFunction::one())
    }

    pub fn term(sigma: Permutation, c: RationalFunction) -> Self {
        let mut e = Self::zero(sigma.degree());
        e.add_term(sigma, c);
        e
    }

    /// `c · λ_e`
    pub fn scalar(degree: usize, c: RationalFunction) -> Self {
        Self::term(Permutation::identity(degree), c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, sigma: &Permutation) -> RationalFunction {
        self.coeffs.get(sigma).cloned().unwrap_or_default()
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &RationalFunction)> {
        self.coeffs.iter()
    }

    fn add_term(&mut self, sigma: Permutation, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(sigma) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::SizeMismatch(format!(
                "C[S_{}] vs C[S_{}]",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (s, c) in &other.coeffs {
            out.add_term(s.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = Self::zero(self.degree);
        for (s, a) in &self.coeffs {
            for (t, b) in &other.coeffs {
                out.add_term(s.compose_unchecked(t), a.mul(b));
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(s, c)| format!("({c})·λ{s}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// `G = Σ_{σ∈S_k} n^{#σ} λ_σ`.
pub fn build_g(k: usize) -> Result<GroupAlgebraElement> {
    check_cap("k", k, MAX_SYMBOLIC_DEGREE)?;
    let mut g = GroupAlgebraElement::zero(k);
    for s in all_permutations(k) {
        let c = RationalFunction::n_pow(s.cycle_count());
        g.add_term(s, c);
    }
    Ok(g)
}

/// Jucys–Murphy element `J_i = Σ_{j<i} λ_{(j i)}` in `C[S_k]`.
///
/// With this indexing `J_1 = 0` and `(n+J_1)(n+J_2)…(n+J_k) = G`; see
/// [`jm_product`].
pub fn jm_element(i: usize, k: usize) -> Result<GroupAlgebraElement> {
    if i == 0 || i > k {
        return Err(Error::InvalidArgument(format!("J_{i} is undefined in S_{k}")));
    }
    let mut e = GroupAlgebraElement::zero(k);
    for j in 1..i {
        e.add_term(Permutation::transposition(j, i, k)?, RationalFunction::one());
    }
    Ok(e)
}

/// `(n + J_1)(n + J_2) … (n + J_k)`, expanded in the group algebra.
pub fn jm_product(k: usize) -> Result<GroupAlgebraElement> {
    check_cap("k", k, MAX_SYMBOLIC_DEGREE)?;
    let n = GroupAlgebraElement::scalar(k, RationalFunction::n());
    let mut acc = GroupAlgebraElement::scalar(k, RationalFunction::one());
    for i in 1..=k {
        acc = acc.mul(&n.add(&jm_element(i, k)?)?)?;
    }
    Ok(acc)
}
