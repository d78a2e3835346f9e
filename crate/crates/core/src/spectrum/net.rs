use std::collections::{BTreeMap, HashSet};

use num_traits::{Signed, Zero};

use super::point::{point_new, Representation};
use super::pos::{pos_or_below, PosOutcome};
use crate::error::{Error, Result};
use crate::lattice;
use crate::numerics::{self, RatInterval, Rational};
use crate::riesz::{self, RieszSpace};

/// Finitely many constructed points, one per surviving product cell.
#[derive(Debug, Clone)]
pub struct SpectrumNet<S: RieszSpace> {
    pub points: Vec<Representation<S>>,
    pub eps: Rational,
    pub elements: Vec<S::Elem>,
    /// For each point, its cell: one interval per element.
    pub cells: Vec<Vec<RatInterval>>,
}

struct Cell<E> {
    elem: E,
    ivs: Vec<RatInterval>,
    outcome: Option<PosOutcome>,
}

/// Keeps the positive cells among `cands` after shrinking the cover. When
/// every cell already certifies `Pos` at `probe`, nothing would be pruned and
/// the family is kept whole without computing the shrink.
fn shrink_and_prune<S: RieszSpace>(
    space: &S,
    mut cands: Vec<Cell<S::Elem>>,
    probe: &Rational,
) -> Result<Vec<Cell<S::Elem>>> {
    if cands.is_empty() {
        return Ok(cands);
    }
    let mut outs = Vec::with_capacity(cands.len());
    for c in &cands {
        match pos_or_below(space, &c.elem, probe)? {
            out @ PosOutcome::Pos(_) => outs.push(out),
            PosOutcome::Below(_) => break,
        }
    }
    if outs.len() == cands.len() {
        for (c, out) in cands.iter_mut().zip(outs) {
            c.outcome = Some(out);
        }
        return Ok(cands);
    }
    let elems: Vec<S::Elem> = cands.iter().map(|c| c.elem.clone()).collect();
    let r = lattice::shrink_cover(space, &elems)?;
    let kept = lattice::prune_cover_outcomes(space, &elems, &r)?;
    let mut cands: Vec<Option<Cell<S::Elem>>> = cands.into_iter().map(Some).collect();
    Ok(kept
        .into_iter()
        .map(|(i, out)| {
            let mut c = cands[i].take().expect("indices are distinct");
            c.outcome = Some(out);
            c
        })
        .collect())
}

/// ε-net for the pseudometrics `ρ_a`, `a ∈ elems`: for each element its
/// range is covered and refined by halving (overlapping grids as in
/// `cover_interval`) until cells have width at most `eps/2`, dropping cells
/// that are `<= 0` on the way; the last level is shrunk and pruned to
/// positive cells. Product cells are formed element by element and one point
/// is started in every surviving cell that does not overlap an earlier kept
/// cell in every interval.
pub fn epsilon_net<S: RieszSpace>(space: &S, elems: &[S::Elem], eps: &Rational) -> Result<SpectrumNet<S>> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument(format!("precision must be positive, got {eps}")));
    }
    for a in elems {
        space.contains(a)?;
    }
    if elems.is_empty() {
        return Ok(SpectrumNet {
            points: Vec::new(),
            eps: eps.clone(),
            elements: Vec::new(),
            cells: Vec::new(),
        });
    }
    let target = eps / numerics::int(2);
    let mut cells: Vec<Cell<S::Elem>> = Vec::new();
    for (i, a) in elems.iter().enumerate() {
        let (p, q, _) = lattice::cover_range(space, a)?;
        // widen to target·2^k so every refinement halves exactly down to target
        let mut span = target.clone();
        while span < &q - &p {
            span *= numerics::int(2);
        }
        let q = &p + span;
        // cells are kept as positive parts: D(x) = D(x⁺) and σ(x) > 0 iff
        // σ(x⁺) > 0, while the truncation keeps representations small
        let range = riesz::positive_part(space, &riesz::in_interval_unchecked(space, a, &p, &q));
        let top = RatInterval::new(p, q)?;
        cells = if i == 0 {
            vec![Cell {
                elem: range,
                ivs: vec![top],
                outcome: None,
            }]
        } else {
            cells
                .into_iter()
                .map(|c| {
                    let mut ivs = c.ivs;
                    ivs.push(top.clone());
                    Cell {
                        elem: space.meet(&c.elem, &range),
                        ivs,
                        outcome: None,
                    }
                })
                .collect()
        };
        loop {
            let width = cells.iter().map(|c| c.ivs[i].width()).max().expect("nonempty");
            if width <= target {
                break;
            }
            let half = numerics::max(&(&width / numerics::int(2)), &target);
            let mut next: Vec<Cell<S::Elem>> = Vec::new();
            let mut seen: HashSet<Vec<RatInterval>> = HashSet::new();
            for c in &cells {
                let iv = &c.ivs[i];
                let grid = lattice::interval_grid(iv.lo(), iv.hi(), &half)?;
                for sub in grid {
                    let mut ivs = c.ivs.clone();
                    ivs[i] = sub.clone();
                    if !seen.insert(ivs.clone()) {
                        continue;
                    }
                    let piece = riesz::positive_part(space, &riesz::in_interval_unchecked(space, a, sub.lo(), sub.hi()));
                    // for the first element the cell is the parent piece,
                    // which lies above `piece` since `sub` is inside it
                    let elem = if i == 0 { piece } else { space.meet(&c.elem, &piece) };
                    next.push(Cell {
                        elem,
                        ivs,
                        outcome: None,
                    });
                }
            }
            // D(b) = 0 for b <= 0, so such cells leave the cover intact;
            // the shrink and the positivity pruning wait for the last level
            let zero = space.zero();
            cells = next.into_iter().filter(|c| !space.leq(&c.elem, &zero).is_true()).collect();
            if cells.is_empty() {
                return Err(Error::CertificateMissing("every cell was pruned".into()));
            }
        }
        cells = shrink_and_prune(space, cells, &(&target / numerics::int(16)))?;
        if cells.is_empty() {
            return Err(Error::CertificateMissing("every cell was pruned".into()));
        }
    }
    // A point started in a cell takes every value inside that cell's
    // intervals, which are at most eps/2 wide. A cell overlapping a kept cell
    // in every interval therefore lies within eps of the kept point.
    let mut points: Vec<Representation<S>> = Vec::with_capacity(cells.len());
    let mut ivs: Vec<Vec<RatInterval>> = Vec::with_capacity(cells.len());
    // kept cells indexed by the lower end of their first interval
    let mut by_lo: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    let mut widest = Rational::zero();
    for c in cells {
        let first = &c.ivs[0];
        let from = first.lo() - &widest;
        let covered = by_lo
            .range(from..=first.hi().clone())
            .flat_map(|(_, ks)| ks)
            .any(|&k| ivs[k].iter().zip(&c.ivs).all(|(x, y)| touches(x, y)));
        if covered {
            continue;
        }
        by_lo.entry(first.lo().clone()).or_default().push(ivs.len());
        widest = numerics::max(&widest, &first.width());
        let out = c.outcome.expect("pruned cells carry their outcome");
        // the point's meet sits below the cell, hence below each `a_k ∈ I_k`
        let mut p = point_new(space, &c.elem, &out)?;
        for (a, iv) in elems.iter().zip(&c.ivs) {
            p.record_implied(a, iv.clone());
        }
        points.push(p);
        ivs.push(c.ivs);
    }
    Ok(SpectrumNet {
        points,
        eps: eps.clone(),
        elements: elems.to_vec(),
        cells: ivs,
    })
}

/// Closed intervals at distance zero.
fn touches(x: &RatInterval, y: &RatInterval) -> bool {
    y.lo() <= x.hi() && x.lo() <= y.hi()
}

/// Truncated `Σ 2^-n |σ(a_n) − τ(a_n)|` with tail `2^{−N+1} <= eps`.
pub fn pseudo_dist<S: RieszSpace>(
    sigma: &mut Representation<S>,
    tau: &mut Representation<S>,
    elems: &[S::Elem],
    eps: &Rational,
) -> Result<Rational> {
    let mut n_max = 0usize;
    while numerics::pow2(1 - n_max as i64) > *eps {
        n_max += 1;
    }
    let mut total = Rational::zero();
    for (n, a) in elems.iter().enumerate().take(n_max + 1) {
        let d = sigma.eval(a, eps)? - tau.eval(a, eps)?;
        total += numerics::abs(&d) * numerics::pow2(-(n as i64));
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoneYosida {
    pub norm_val: Rational,
    pub net_max: Rational,
    pub points: usize,
}

impl StoneYosida {
    pub fn within(&self, eps: &Rational) -> bool {
        numerics::abs(&(&self.norm_val - &self.net_max)) <= eps * numerics::int(3)
    }
}

/// `‖a‖` from the norm cut against `max_σ |σ(a)|` over an ε-net for `a`.
pub fn stone_yosida_check<S: RieszSpace>(space: &S, a: &S::Elem, eps: &Rational) -> Result<StoneYosida> {
    let norm_val = riesz::norm_cut(space, a)?.approx(eps)?;
    let mut net = epsilon_net(space, std::slice::from_ref(a), eps)?;
    let mut net_max: Option<Rational> = None;
    for p in net.points.iter_mut() {
        let v = numerics::abs(&p.eval(a, eps)?);
        if net_max.as_ref().map_or(true, |m| &v > m) {
            net_max = Some(v);
        }
    }
    Ok(StoneYosida {
        norm_val,
        net_max: net_max.unwrap_or_else(Rational::zero),
        points: net.points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{QnElement, QnSpace};
    use crate::numerics::{int, rat};

    #[test]
    fn net_finds_both_projections() {
        let s = QnSpace::new(2).unwrap();
        let a = QnElement::from_i64(&[0, 1]);
        let eps = rat(1, 4);
        let mut net = epsilon_net(&s, &[a.clone()], &eps).unwrap();
        let mut vals: Vec<Rational> = net.points.iter_mut().map(|p| p.eval(&a, &eps).unwrap()).collect();
        vals.sort();
        assert!(vals.iter().any(|v| numerics::abs(&(v - int(0))) <= eps));
        assert!(vals.iter().any(|v| numerics::abs(&(v - int(1))) <= eps));
    }

    #[test]
    fn pruning_falls_back_to_the_shrink() {
        let s = QnSpace::new(2).unwrap();
        let cell = |c: &[(i64, i64)]| Cell {
            elem: QnElement::new(c.iter().map(|&(n, d)| rat(n, d)).collect()),
            ivs: Vec::new(),
            outcome: None,
        };
        // every cell is Pos at the probe: all kept
        let kept = shrink_and_prune(&s, vec![cell(&[(1, 1), (0, 1)]), cell(&[(0, 1), (1, 2)])], &rat(1, 8)).unwrap();
        assert_eq!(kept.len(), 2);
        // the small cell fails the probe; the shrink r = 1/2 then drops it
        let kept = shrink_and_prune(&s, vec![cell(&[(1, 1), (1, 1)]), cell(&[(1, 10000), (0, 1)])], &rat(1, 8)).unwrap();
        assert_eq!(kept.len(), 1);
        assert!(kept.iter().all(|c| c.outcome.as_ref().is_some_and(PosOutcome::is_pos)));
    }

    #[test]
    fn single_point_space_gives_one_point() {
        let s = QnSpace::new(1).unwrap();
        let net = epsilon_net(&s, &[QnElement::from_i64(&[3])], &rat(1, 8)).unwrap();
        assert_eq!(net.points.len(), 1);
        assert!(epsilon_net(&s, &[], &rat(1, 8)).unwrap().points.is_empty());
    }

    #[test]
    fn stone_yosida_examples() {
        let s = QnSpace::new(2).unwrap();
        let eps = rat(1, 64);
        let r = stone_yosida_check(&s, &QnElement::from_i64(&[1, -3]), &eps).unwrap();
        assert_eq!(r.norm_val, int(3));
        assert!(r.within(&eps));
        let r = stone_yosida_check(&s, &s.unit(), &eps).unwrap();
        assert!(r.within(&eps));
    }

    #[test]
    fn pseudo_dist_examples() {
        let s = QnSpace::new(2).unwrap();
        let eps = rat(1, 32);
        let mk = |c: &[i64]| {
            let a = QnElement::from_i64(c);
            let out = crate::spectrum::pos_or_below(&s, &a, &rat(1, 4)).unwrap();
            point_new(&s, &a, &out).unwrap()
        };
        let mut p1 = mk(&[1, 0]);
        let mut p2 = mk(&[0, 1]);
        let a = vec![QnElement::from_i64(&[0, 1])];
        let d = pseudo_dist(&mut p1, &mut p2, &a, &eps).unwrap();
        assert!(numerics::abs(&(d - int(1))) <= &eps * int(2));
        let mut q1 = mk(&[1, 0]);
        let d = pseudo_dist(&mut p1, &mut q1, &a, &eps).unwrap();
        assert!(d <= &eps * int(4));
        assert_eq!(pseudo_dist(&mut p1, &mut p2, &[], &eps).unwrap(), int(0));
        let one = p1.eval(&s.unit(), &eps).unwrap();
        assert!(numerics::abs(&(one - int(1))) <= eps);
    }
}
