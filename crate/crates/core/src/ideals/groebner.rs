//! Buchberger's algorithm with Gebauer–Möller pair elimination and exact
//! cofactor tracking.

use crate::algebra::{Ambient, Field, MPoly, Monomial, MonomialOrder};

use super::IdealError;

/// Upper bound on the number of single reduction steps a computation may
/// perform before giving up with [`IdealError::BudgetExceeded`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_reductions: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_reductions: 2_000_000 }
    }
}

struct Counter {
    used: usize,
    limit: usize,
}

impl Counter {
    fn tick(&mut self) -> Result<(), IdealError> {
        self.used += 1;
        if self.used > self.limit {
            Err(IdealError::BudgetExceeded { steps: self.limit })
        } else {
            Ok(())
        }
    }
}

type Row<F> = Vec<MPoly<F>>;

#[derive(Clone)]
struct Elem<F: Field> {
    poly: MPoly<F>,
    lm: Monomial,
    lc: F,
    row: Option<Row<F>>,
}

/// A reduced Gröbner basis, optionally with the matrix expressing each basis
/// element in terms of the original generators.
#[derive(Clone, Debug)]
pub struct GroebnerData<F: Field> {
    ambient: Ambient,
    order: MonomialOrder,
    generators: Vec<MPoly<F>>,
    basis: Vec<MPoly<F>>,
    cofactors: Option<Vec<Row<F>>>,
}

fn row_axpy<F: Field>(dst: &mut Option<Row<F>>, src: &Option<Row<F>>, c: &F, m: &Monomial) {
    if let (Some(d), Some(s)) = (dst.as_mut(), src.as_ref()) {
        for (a, b) in d.iter_mut().zip(s) {
            a.add_scaled(b, c, m);
        }
    }
}

fn row_scale<F: Field>(row: &mut Option<Row<F>>, c: &F) {
    if let Some(r) = row.as_mut() {
        for e in r.iter_mut() {
            *e = e.scale(c);
        }
    }
}

/// Fully reduces `p` (carrying `row` with `p = row . gens`) by the elements
/// listed in `active`, keeping `row` consistent.
fn reduce_with<F: Field>(
    mut p: MPoly<F>,
    mut row: Option<Row<F>>,
    elems: &[Elem<F>],
    active: &[usize],
    order: MonomialOrder,
    counter: &mut Counter,
) -> Result<(MPoly<F>, Option<Row<F>>), IdealError> {
    let mut rem = MPoly::zero(p.ambient());
    while let Some((m, c)) = p.leading(order).map(|(m, c)| (m.clone(), c.clone())) {
        let hit = active.iter().find(|&&k| m.divisible_by(&elems[k].lm));
        match hit {
            Some(&k) => {
                counter.tick()?;
                let e = &elems[k];
                let factor = m.div(&e.lm).expect("divisibility checked");
                let coef = -(c / e.lc.clone());
                p.add_scaled(&e.poly, &coef, &factor);
                row_axpy(&mut row, &e.row, &coef, &factor);
            }
            None => {
                p.add_term(m.clone(), -c.clone());
                rem.add_term(m, c);
            }
        }
    }
    Ok((rem, row))
}

fn make_elem<F: Field>(poly: MPoly<F>, mut row: Option<Row<F>>, order: MonomialOrder) -> Elem<F> {
    let (lm, lc) = {
        let (m, c) = poly.leading(order).expect("nonzero basis element");
        (m.clone(), c.clone())
    };
    let inv = lc.inv();
    row_scale(&mut row, &inv);
    Elem { poly: poly.scale(&inv), lm, lc: F::one(), row }
}

/// Gebauer–Möller update: inserts element `h` into the active set and
/// refreshes the critical pair list.
fn update<F: Field>(active: &mut Vec<usize>, pairs: &mut Vec<(usize, usize)>, h: usize, elems: &[Elem<F>]) {
    let lm_h = &elems[h].lm;
    let cands: Vec<usize> = active.clone();
    let mut kept: Vec<usize> = Vec::new();
    for (idx, &g1) in cands.iter().enumerate() {
        let lm1 = &elems[g1].lm;
        if lm_h.coprime(lm1) {
            kept.push(g1);
            continue;
        }
        let l1 = lm_h.lcm(lm1);
        let dominated = cands[idx + 1..].iter().chain(kept.iter()).any(|&g2| l1.divisible_by(&lm_h.lcm(&elems[g2].lm)));
        if !dominated {
            kept.push(g1);
        }
    }
    pairs.retain(|&(a, b)| {
        let la = &elems[a].lm;
        let lb = &elems[b].lm;
        let lab = la.lcm(lb);
        !(lab.divisible_by(lm_h) && la.lcm(lm_h) != lab && lm_h.lcm(lb) != lab)
    });
    for g in kept {
        if !lm_h.coprime(&elems[g].lm) {
            pairs.push((g, h));
        }
    }
    active.retain(|&g| !elems[g].lm.divisible_by(lm_h));
    active.push(h);
}

impl<F: Field> GroebnerData<F> {
    /// Computes the reduced Gröbner basis of the ideal generated by `gens`.
    pub fn compute(
        ambient: &Ambient,
        gens: &[MPoly<F>],
        order: MonomialOrder,
        track_cofactors: bool,
        budget: Budget,
    ) -> Result<Self, IdealError> {
        let m = gens.len();
        let mut counter = Counter { used: 0, limit: budget.max_reductions };
        let unit_row = |i: usize| -> Option<Row<F>> {
            track_cofactors
                .then(|| (0..m).map(|j| if i == j { MPoly::one(ambient) } else { MPoly::zero(ambient) }).collect())
        };

        let mut elems: Vec<Elem<F>> = Vec::new();
        let mut active: Vec<usize> = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();

        let mut order_in: Vec<usize> = (0..m).filter(|&i| !gens[i].is_zero()).collect();
        order_in.sort_by(|&a, &b| {
            order.cmp(gens[a].leading_monomial(order).unwrap(), gens[b].leading_monomial(order).unwrap())
        });
        for i in order_in {
            let (h, row) = reduce_with(gens[i].clone(), unit_row(i), &elems, &active, order, &mut counter)?;
            if h.is_zero() {
                continue;
            }
            elems.push(make_elem(h, row, order));
            update(&mut active, &mut pairs, elems.len() - 1, &elems);
        }

        while !pairs.is_empty() {
            let (best, _) = pairs
                .iter()
                .enumerate()
                .min_by(|(_, &(a1, b1)), (_, &(a2, b2))| {
                    let l1 = elems[a1].lm.lcm(&elems[b1].lm);
                    let l2 = elems[a2].lm.lcm(&elems[b2].lm);
                    order.cmp(&l1, &l2)
                })
                .expect("nonempty");
            let (a, b) = pairs.swap_remove(best);
            let lcm = elems[a].lm.lcm(&elems[b].lm);
            let fa = lcm.div(&elems[a].lm).unwrap();
            let fb = lcm.div(&elems[b].lm).unwrap();
            let mut s = elems[a].poly.mul_monomial(&fa, &F::one());
            s.add_scaled(&elems[b].poly, &(-F::one()), &fb);
            let mut row: Option<Row<F>> = track_cofactors.then(|| vec![MPoly::zero(ambient); m]);
            row_axpy(&mut row, &elems[a].row, &F::one(), &fa);
            row_axpy(&mut row, &elems[b].row, &(-F::one()), &fb);
            let (h, row) = reduce_with(s, row, &elems, &active, order, &mut counter)?;
            if h.is_zero() {
                continue;
            }
            elems.push(make_elem(h, row, order));
            update(&mut active, &mut pairs, elems.len() - 1, &elems);
        }

        // inter-reduce the (already minimal) active set
        active.sort_by(|&x, &y| order.cmp(&elems[x].lm, &elems[y].lm));
        let mut out_basis = Vec::with_capacity(active.len());
        let mut out_rows = Vec::with_capacity(active.len());
        for idx in 0..active.len() {
            let k = active[idx];
            let others: Vec<usize> = active.iter().copied().filter(|&o| o != k).collect();
            // the leading monomial is not divisible by any other, so only the tail changes
            let (g, row) =
                reduce_with(elems[k].poly.clone(), elems[k].row.clone(), &elems, &others, order, &mut counter)?;
            let e = make_elem(g, row, order);
            elems[k] = e.clone();
            out_basis.push(e.poly);
            out_rows.push(e.row);
        }
        let cofactors = if track_cofactors { Some(out_rows.into_iter().map(Option::unwrap).collect()) } else { None };
        Ok(GroebnerData { ambient: ambient.clone(), order, generators: gens.to_vec(), basis: out_basis, cofactors })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn basis(&self) -> &[MPoly<F>] {
        &self.basis
    }

    pub fn generators(&self) -> &[MPoly<F>] {
        &self.generators
    }

    /// Row `k` expresses `basis[k]` as a combination of the generators.
    pub fn cofactors(&self) -> Option<&[Row<F>]> {
        self.cofactors.as_deref()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|g| g.leading_monomial(self.order).unwrap().clone()).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.iter().any(|g| g.is_constant())
    }

    /// Normal form of `f` together with `lift` such that
    /// `f = sum(lift[j] * generators[j]) + normal_form`. The lift is only
    /// available when cofactors were tracked.
    pub fn reduce(&self, f: &MPoly<F>) -> Result<(MPoly<F>, Option<Row<F>>), IdealError> {
        self.reduce_with_budget(f, Budget::default())
    }

    pub fn reduce_with_budget(&self, f: &MPoly<F>, budget: Budget) -> Result<(MPoly<F>, Option<Row<F>>), IdealError> {
        if f.ambient() != &self.ambient {
            return Err(IdealError::AmbientMismatch);
        }
        let elems: Vec<Elem<F>> = self
            .basis
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let (lm, lc) = g.leading(self.order).map(|(m, c)| (m.clone(), c.clone())).unwrap();
                Elem { poly: g.clone(), lm, lc, row: self.cofactors.as_ref().map(|c| c[k].clone()) }
            })
            .collect();
        let active: Vec<usize> = (0..elems.len()).collect();
        let m = self.generators.len();
        let zero_row = self.cofactors.as_ref().map(|_| vec![MPoly::zero(&self.ambient); m]);
        let mut counter = Counter { used: 0, limit: budget.max_reductions };
        let (nf, consumed) = reduce_with(f.clone(), zero_row, &elems, &active, self.order, &mut counter)?;
        // reduce_with tracks `f - nf = -(consumed) . gens`
        let lift = consumed.map(|row| row.into_iter().map(|e| -e).collect());
        Ok((nf, lift))
    }

    /// Standard monomials when the quotient is finite-dimensional.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        let n = self.ambient.arity();
        if self.is_unit_ideal() {
            return Some(Vec::new());
        }
        let lms = self.leading_monomials();
        let mut bounds = vec![None; n];
        for lm in &lms {
            let support: Vec<usize> = (0..n).filter(|&i| lm.exp(i) > 0).collect();
            if support.len() == 1 {
                let i = support[0];
                let e = lm.exp(i);
                bounds[i] = Some(bounds[i].map_or(e, |b: u32| b.min(e)));
            }
        }
        if bounds.iter().any(Option::is_none) {
            return None;
        }
        let bounds: Vec<u32> = bounds.into_iter().map(Option::unwrap).collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        loop {
            let m = Monomial::from_exps(&cur);
            if !lms.iter().any(|lm| m.divisible_by(lm)) {
                out.push(m);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return Some(out);
                }
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::Poly;

    fn setup(gens: &[&str]) -> (Ambient, Vec<Poly>) {
        let a = Ambient::new(&["x", "y"]);
        let g = gens.iter().map(|s| parse_poly(s, &a).unwrap()).collect();
        (a, g)
    }

    fn check_cofactors(gb: &GroebnerData<crate::Rational>) {
        let amb = gb.ambient().clone();
        for (g, row) in gb.basis().iter().zip(gb.cofactors().unwrap()) {
            let rebuilt = row.iter().zip(gb.generators()).fold(Poly::zero(&amb), |acc, (c, f)| &acc + &(c * f));
            assert_eq!(&rebuilt, g);
        }
    }

    #[test]
    fn already_reduced_basis() {
        let (a, g) = setup(&["x+y", "y^2"]);
        let gb = GroebnerData::compute(&a, &g, MonomialOrder::Grevlex, true, Budget::default()).unwrap();
        assert_eq!(gb.basis(), &[parse_poly("x+y", &a).unwrap(), parse_poly("y^2", &a).unwrap()]);
        check_cofactors(&gb);
    }

    #[test]
    fn containment_collapses() {
        let (a, g) = setup(&["x^2-1", "x-1"]);
        let gb = GroebnerData::compute(&a, &g, MonomialOrder::Grevlex, true, Budget::default()).unwrap();
        assert_eq!(gb.basis(), &[parse_poly("x-1", &a).unwrap()]);
        check_cofactors(&gb);
    }

    #[test]
    fn cofactors_rebuild_basis() {
        let (a, g) = setup(&["x^2+y^2", "x*y"]);
        for order in [MonomialOrder::Grevlex, MonomialOrder::Lex, MonomialOrder::EliminateLast(1)] {
            let gb = GroebnerData::compute(&a, &g, order, true, Budget::default()).unwrap();
            check_cofactors(&gb);
        }
    }

    #[test]
    fn reduce_gives_verifiable_lift() {
        let (a, g) = setup(&["x+y", "y^2"]);
        let gb = GroebnerData::compute(&a, &g, MonomialOrder::Grevlex, true, Budget::default()).unwrap();
        let f = parse_poly("x^2", &a).unwrap();
        let (nf, lift) = gb.reduce(&f).unwrap();
        assert!(nf.is_zero());
        let lift = lift.unwrap();
        assert_eq!(lift[0], parse_poly("x-y", &a).unwrap());
        assert_eq!(lift[1], parse_poly("1", &a).unwrap());
    }

    #[test]
    fn reduce_irreducible_remainder() {
        let (a, g) = setup(&["y"]);
        let gb = GroebnerData::compute(&a, &g, MonomialOrder::Grevlex, true, Budget::default()).unwrap();
        let (nf, lift) = gb.reduce(&parse_poly("x", &a).unwrap()).unwrap();
        assert_eq!(nf, parse_poly("x", &a).unwrap());
        assert!(lift.unwrap()[0].is_zero());
    }

    #[test]
    fn tiny_budget_is_reported() {
        let (a, g) = setup(&["x^3 - y", "y^3 - x", "x*y - 1"]);
        let r = GroebnerData::compute(&a, &g, MonomialOrder::Grevlex, true, Budget { max_reductions: 1 });
        assert!(matches!(r, Err(IdealError::BudgetExceeded { .. })));
    }
}
