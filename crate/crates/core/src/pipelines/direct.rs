//! Bounded direct enumeration of `(a, α)` pairs, used as an independent
//! cross-check of the polynomial pipeline.

use super::{check_epsilon, replay_points, PipelineError, PolyWitness, Polynomial};
use crate::coloring::ColoringSpec;
use crate::exactnum::Rational;

/// First pair with `a ∈ (0, ε)`, `α != 0`, both of height at most
/// `height_bound`, such that `{a} ∪ {a + P_i(α)}` lies in `(0, ε)` and is
/// monochromatic. Pairs are visited by `max(height(a), height(α))`, then
/// `a` in height order, then `α` in height order.
pub fn direct_poly_witness(
    polys: &[Polynomial],
    spec: &ColoringSpec,
    epsilon: &Rational,
    height_bound: u64,
) -> Result<Option<PolyWitness>, PipelineError> {
    check_epsilon(epsilon)?;
    if polys.is_empty() {
        return Err(PipelineError::NoPolynomials);
    }
    let all = Rational::all_up_to_height(height_bound);
    let zero = Rational::zero();
    let starts: Vec<(u64, Rational)> = all
        .iter()
        .filter(|x| x.in_open_interval(&zero, epsilon))
        .map(|x| (height_u64(x), x.clone()))
        .collect();
    let steps: Vec<(u64, Rational)> = all
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| (height_u64(x), x.clone()))
        .collect();
    for h in 1..=height_bound {
        for (ha, a) in starts.iter().take_while(|(ha, _)| *ha <= h) {
            let fresh_a = *ha == h;
            for (hs, alpha) in steps.iter().take_while(|(hs, _)| *hs <= h) {
                if !fresh_a && *hs != h {
                    continue;
                }
                let candidate = PolyWitness {
                    a: a.clone(),
                    alpha: alpha.clone(),
                    polys: polys.to_vec(),
                    color: 0,
                };
                if let Ok(color) = replay_points(&candidate.points(), spec, epsilon) {
                    return Ok(Some(PolyWitness { color, ..candidate }));
                }
            }
        }
    }
    Ok(None)
}

fn height_u64(x: &Rational) -> u64 {
    Rational::from_integer(x.height())
        .to_u64()
        .expect("bounded by the enumeration height")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::parse_coloring;
    use crate::pipelines::parse_polynomials;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn constant_coloring_gives_smallest_pair() {
        let spec = parse_coloring("constant:1").unwrap();
        let polys = parse_polynomials("x").unwrap();
        // a = 1/3 first pairs with α = -1/4 at height 4
        let w = direct_poly_witness(&polys, &spec, &q("1/2"), 10).unwrap().unwrap();
        assert_eq!(w.a, q("1/3"));
        assert_eq!(w.points().len(), 2);
        assert!(w
            .points()
            .iter()
            .all(|p| p.in_open_interval(&Rational::zero(), &q("1/2"))));
    }

    #[test]
    fn respects_height_bound() {
        let spec = parse_coloring("constant:1").unwrap();
        let polys = parse_polynomials("x").unwrap();
        assert_eq!(direct_poly_witness(&polys, &spec, &q("1/2"), 2).unwrap(), None);
    }

    #[test]
    fn witnesses_replay() {
        let eps = q("1/2");
        for text in ["modsum:2", "modnum:3", "threshold:1/4", "interval:3:1/8,1/4"] {
            let spec = parse_coloring(text).unwrap();
            let polys = parse_polynomials("x, x^2").unwrap();
            let w = direct_poly_witness(&polys, &spec, &eps, 30).unwrap().unwrap();
            assert_eq!(replay_points(&w.points(), &spec, &eps), Ok(w.color), "{text}");
        }
    }
}
