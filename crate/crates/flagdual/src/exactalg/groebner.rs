//! Buchberger's algorithm with the normal selection strategy and the
//! Gebauer–Möller criteria, plus Rabinowitsch saturation.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::field::Field;
use super::poly::{Mono, MonoOrder, Poly, MAX_VARS};
use super::AlgError;

#[derive(Clone, PartialEq)]
pub struct Ideal<F> {
    pub nvars: usize,
    pub gens: Vec<Poly<F>>,
}

impl<F: Field> std::fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.gens.iter()).finish()
    }
}

impl<F: Field> Ideal<F> {
    pub fn new(nvars: usize, gens: Vec<Poly<F>>) -> Self {
        assert!(nvars <= MAX_VARS);
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { nvars, gens }
    }

    pub fn unit(nvars: usize) -> Self {
        Ideal { nvars, gens: vec![Poly::one()] }
    }

    /// True when some generator is a nonzero constant (only meaningful on a reduced basis).
    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| !g.is_zero() && g.is_constant())
    }
}

/// Hard caps on a Gröbner computation.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Budget {
    pub max_basis: usize,
    pub max_reductions: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_basis: 20_000, max_reductions: 2_000_000 }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GbStats {
    pub reductions: usize,
    pub zero_reductions: usize,
    pub pairs_skipped: usize,
    pub basis_peak: usize,
}

fn var_mask(m: &Mono) -> u32 {
    let mut mask = 0u32;
    for (i, &e) in m.exps().iter().enumerate() {
        if e > 0 {
            mask |= 1 << i;
        }
    }
    mask
}

struct Reducers<F> {
    polys: Vec<Poly<F>>,
    lms: Vec<Mono>,
    masks: Vec<u32>,
}

impl<F: Field> Reducers<F> {
    fn new() -> Self {
        Reducers { polys: Vec::new(), lms: Vec::new(), masks: Vec::new() }
    }

    fn push(&mut self, p: Poly<F>) {
        let lm = *p.lm().expect("nonzero reducer");
        self.masks.push(var_mask(&lm));
        self.lms.push(lm);
        self.polys.push(p);
    }

    fn find(&self, m: &Mono, skip: Option<usize>) -> Option<usize> {
        let mk = var_mask(m);
        (0..self.lms.len()).find(|&i| Some(i) != skip && self.masks[i] & !mk == 0 && self.lms[i].divides(m))
    }

    /// Full normal form of `p`; all reducers must be monic.
    fn reduce(&self, mut p: Poly<F>, skip: Option<usize>) -> Poly<F> {
        let mut k = 0;
        while k < p.len() {
            let (m, c) = p.terms()[k].clone();
            match self.find(&m, skip) {
                Some(i) => {
                    let q = self.lms[i].div_into(&m);
                    p = p.sub_mul_term(&c, &q, &self.polys[i]);
                }
                None => k += 1,
            }
        }
        p
    }
}

/// Normal form of `f` with respect to `basis` (not necessarily a Gröbner basis).
pub fn normal_form<F: Field>(f: &Poly<F>, basis: &[Poly<F>]) -> Poly<F> {
    let mut r = Reducers::new();
    for b in basis.iter().filter(|b| !b.is_zero()) {
        r.push(b.with_order(f.order()).monic());
    }
    r.reduce(f.clone(), None)
}

pub fn s_polynomial<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
    let (fm, gm) = (f.lm().unwrap(), g.lm().unwrap());
    let l = fm.lcm(gm);
    let a = f.mul_term(&f.lc().unwrap().try_inv().unwrap(), &fm.div_into(&l));
    let b = g.lc().unwrap().try_inv().unwrap();
    a.sub_mul_term(&b, &gm.div_into(&l), g)
}

/// Checks the Buchberger criterion: all S-polynomials reduce to zero.
pub fn is_groebner<F: Field>(basis: &[Poly<F>]) -> bool {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if !normal_form(&s_polynomial(&basis[i], &basis[j]), basis).is_zero() {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
}

/// Reduced Gröbner basis of `ideal` in the given monomial order.
pub fn groebner_basis_in<F: Field>(
    ideal: &Ideal<F>,
    order: MonoOrder,
    budget: Budget,
) -> Result<(Ideal<F>, GbStats), AlgError> {
    let mut stats = GbStats::default();
    let mut g: Vec<Poly<F>> = Vec::new();
    let mut red = Reducers::new();
    // pending pairs bucketed by lcm degree
    let mut pairs: BTreeMap<u32, Vec<Pair>> = BTreeMap::new();

    let mut inputs: Vec<Poly<F>> = ideal.gens.iter().map(|p| p.with_order(order)).filter(|p| !p.is_zero()).collect();
    inputs.sort_by(|a, b| order.cmp(a.lm().unwrap(), b.lm().unwrap()));

    let unit = |nv| Ok((Ideal::unit(nv), GbStats::default()));

    for p in inputs {
        let r = red.reduce(p, None);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return unit(ideal.nvars);
        }
        insert(&mut g, &mut red, &mut pairs, r.monic(), order, &mut stats);
    }

    while let Some(mut entry) = pairs.first_entry() {
        let bucket = entry.get_mut();
        let pair = bucket.remove(0);
        if bucket.is_empty() {
            entry.remove();
        }
        stats.reductions += 1;
        if stats.reductions > budget.max_reductions || g.len() > budget.max_basis {
            return Err(AlgError::BudgetExceeded { reductions: stats.reductions, basis: g.len() });
        }
        let sp = s_polynomial(&g[pair.i], &g[pair.j]);
        let r = red.reduce(sp, None);
        if r.is_zero() {
            stats.zero_reductions += 1;
            continue;
        }
        if r.is_constant() {
            let mut s = stats.clone();
            s.basis_peak = s.basis_peak.max(g.len());
            return Ok((Ideal::unit(ideal.nvars), s));
        }
        insert(&mut g, &mut red, &mut pairs, r.monic(), order, &mut stats);
    }

    stats.basis_peak = g.len();
    Ok((Ideal { nvars: ideal.nvars, gens: interreduce(g, order) }, stats))
}

fn insert<F: Field>(
    g: &mut Vec<Poly<F>>,
    red: &mut Reducers<F>,
    pairs: &mut BTreeMap<u32, Vec<Pair>>,
    h: Poly<F>,
    order: MonoOrder,
    stats: &mut GbStats,
) {
    let t = g.len();
    let hm = *h.lm().unwrap();
    // candidate new pairs with every current element whose leading monomial is not
    // already divisible by another's in the active set
    let mut cand: Vec<(Pair, bool)> = (0..t)
        .map(|i| {
            let gm = red.lms[i];
            (Pair { i, j: t, lcm: gm.lcm(&hm) }, gm.coprime(&hm))
        })
        .collect();

    // criterion M: drop (i,t) if some (k,t) has lcm properly dividing it
    let lcms: Vec<Mono> = cand.iter().map(|c| c.0.lcm).collect();
    cand.retain(|(p, _)| {
        !lcms.iter().any(|l| *l != p.lcm && l.divides(&p.lcm))
    });
    // criterion F and product criterion: among equal lcm keep one, drop the group if any is coprime
    let mut groups: BTreeMap<Vec<u8>, Vec<(Pair, bool)>> = BTreeMap::new();
    for c in cand {
        groups.entry(c.0.lcm.exps().to_vec()).or_default().push(c);
    }
    let mut kept: Vec<Pair> = Vec::new();
    for (_, grp) in groups {
        if grp.iter().any(|(_, coprime)| *coprime) {
            stats.pairs_skipped += grp.len();
            continue;
        }
        stats.pairs_skipped += grp.len() - 1;
        kept.push(grp[0].0);
    }

    // criterion B on old pairs
    for bucket in pairs.values_mut() {
        let n0 = bucket.len();
        bucket.retain(|p| {
            if !hm.divides(&p.lcm) {
                return true;
            }
            let li = red.lms[p.i].lcm(&hm);
            let lj = red.lms[p.j].lcm(&hm);
            li == p.lcm || lj == p.lcm
        });
        stats.pairs_skipped += n0 - bucket.len();
    }
    pairs.retain(|_, b| !b.is_empty());

    for p in kept {
        let bucket = pairs.entry(p.lcm.deg()).or_default();
        bucket.push(p);
    }
    for bucket in pairs.values_mut() {
        bucket.sort_by(|a, b| order.cmp(&a.lcm, &b.lcm).then(a.j.cmp(&b.j)).then(a.i.cmp(&b.i)));
    }
    g.push(h.clone());
    red.push(h);
    stats.basis_peak = stats.basis_peak.max(g.len());
}

/// Minimalizes and fully interreduces a Gröbner basis; output is monic and sorted
/// by increasing leading monomial.
fn interreduce<F: Field>(g: Vec<Poly<F>>, order: MonoOrder) -> Vec<Poly<F>> {
    let mut keep: Vec<Poly<F>> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let pm = p.lm().unwrap();
        let redundant = g.iter().enumerate().any(|(j, q)| {
            let qm = q.lm().unwrap();
            j != i && qm.divides(pm) && (qm != pm || j < i)
        });
        if !redundant {
            keep.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let mut red = Reducers::new();
        for (j, q) in keep.iter().enumerate() {
            if j != i {
                red.push(q.clone());
            }
        }
        out.push(red.reduce(keep[i].clone(), None).monic());
    }
    out.sort_by(|a, b| order.cmp(a.lm().unwrap(), b.lm().unwrap()));
    out
}

/// Reduced Gröbner basis in degrevlex.
pub fn groebner_basis<F: Field>(ideal: &Ideal<F>, budget: Budget) -> Result<(Ideal<F>, GbStats), AlgError> {
    groebner_basis_in(ideal, MonoOrder::DegRevLex, budget)
}

/// `I : f^∞` by the Rabinowitsch trick. The extra variable is placed first and
/// eliminated with a block order; a degrevlex attempt runs first since a unit
/// ideal needs no elimination.
pub fn saturate<F: Field>(ideal: &Ideal<F>, f: &Poly<F>, budget: Budget) -> Result<(Ideal<F>, GbStats), AlgError> {
    let n = ideal.nvars;
    if n + 1 > MAX_VARS {
        return Err(AlgError::Invalid("no room for the saturation variable".into()));
    }
    let shift: Vec<usize> = (1..=n).collect();
    let lift = |p: &Poly<F>, o| p.rename_vars(&shift, o);

    let build = |o: MonoOrder| {
        let mut gens: Vec<Poly<F>> = ideal.gens.iter().map(|p| lift(p, o)).collect();
        let z = Poly::<F>::var(0).with_order(o);
        gens.push(&(&z * &lift(f, o)) - &Poly::one());
        Ideal::new(n + 1, gens)
    };

    let (gb, stats) = groebner_basis_in(&build(MonoOrder::DegRevLex), MonoOrder::DegRevLex, budget)?;
    if gb.is_unit() {
        return Ok((Ideal::unit(n), stats));
    }
    let (gb, mut stats2) = groebner_basis_in(&build(MonoOrder::Elim(1)), MonoOrder::Elim(1), budget)?;
    let down: Vec<usize> = std::iter::once(MAX_VARS - 1).chain(0..n).collect();
    let kept: Vec<Poly<F>> = gb
        .gens
        .iter()
        .filter(|p| !p.uses_var(0))
        .map(|p| p.rename_vars(&down, MonoOrder::DegRevLex))
        .collect();
    let (out, s3) = groebner_basis(&Ideal::new(n, kept), budget)?;
    stats2.reductions += stats.reductions + s3.reductions;
    Ok((out, stats2))
}

/// Membership test through a Gröbner basis of the ideal.
pub fn contains<F: Field>(gb: &Ideal<F>, f: &Poly<F>) -> bool {
    normal_form(f, &gb.gens).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::Fp;

    type F17 = Fp<17>;
    type P = Poly<F17>;

    fn x() -> P {
        P::var(0)
    }
    fn y() -> P {
        P::var(1)
    }
    fn one() -> P {
        P::one()
    }

    #[test]
    fn principal_ideal() {
        let (gb, _) = groebner_basis(&Ideal::new(2, vec![x()]), Budget::default()).unwrap();
        assert_eq!(gb.gens, vec![x()]);
    }

    #[test]
    fn unit_ideal_detected() {
        // x^2, xy + 1
        let i = Ideal::new(2, vec![&x() * &x(), &(&x() * &y()) + &one()]);
        let (gb, _) = groebner_basis(&i, Budget::default()).unwrap();
        assert!(gb.is_unit());
        assert_eq!(gb.gens, vec![one()]);
    }

    #[test]
    fn hand_buchberger_example() {
        // xy - 1, y^2 - 1  ->  {y^2 - 1, x - y}
        let i = Ideal::new(2, vec![&(&x() * &y()) - &one(), &(&y() * &y()) - &one()]);
        let (gb, _) = groebner_basis(&i, Budget::default()).unwrap();
        let mut expect = vec![&x() - &y(), &(&y() * &y()) - &one()];
        expect.sort_by(|a, b| MonoOrder::DegRevLex.cmp(a.lm().unwrap(), b.lm().unwrap()));
        assert_eq!(gb.gens, expect);
        assert!(is_groebner(&gb.gens));
    }

    #[test]
    fn saturation_examples() {
        let (s, _) = saturate(&Ideal::new(2, vec![&x() * &y()]), &x(), Budget::default()).unwrap();
        assert_eq!(s.gens, vec![y()]);
        let (s, _) = saturate(&Ideal::new(2, vec![x()]), &x(), Budget::default()).unwrap();
        assert!(s.is_unit());
    }

    #[test]
    fn budget_is_reported() {
        let z = P::var(2);
        let i = Ideal::new(
            3,
            vec![&(&x() * &x()) - &(&y() * &z), &(&y() * &y()) - &(&x() * &z), &(&z * &z) - &(&x() * &y())],
        );
        let r = groebner_basis(&i, Budget { max_basis: 100, max_reductions: 1 });
        assert!(matches!(r, Err(AlgError::BudgetExceeded { .. })));
    }

    fn small_poly(coeffs: &[(u32, u8, u8)]) -> P {
        coeffs.iter().fold(P::zero(), |acc, &(c, ex, ey)| {
            let mut m = P::constant(F17::new(c));
            for _ in 0..ex {
                m = &m * &x();
            }
            for _ in 0..ey {
                m = &m * &y();
            }
            &acc + &m
        })
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn computed_bases_pass_the_buchberger_test(
            f in proptest::collection::vec((0u32..17, 0u8..3, 0u8..3), 1..4),
            g in proptest::collection::vec((0u32..17, 0u8..3, 0u8..3), 1..4),
        ) {
            let (f, g) = (small_poly(&f), small_poly(&g));
            let (gb, _) = groebner_basis(&Ideal::new(2, vec![f.clone(), g.clone()]), Budget::default()).unwrap();
            proptest::prop_assert!(is_groebner(&gb.gens));
            proptest::prop_assert!(contains(&gb, &f) && contains(&gb, &g));
            // the S-polynomial of the inputs lies in the ideal too
            if !f.is_zero() && !g.is_zero() {
                proptest::prop_assert!(contains(&gb, &s_polynomial(&f, &g)));
            }
        }
    }
}
