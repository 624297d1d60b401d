//! Exact integration over a graph of products of voltage functions.
//!
//! With `p`, `q` vertices, every integrand is a polynomial in arclength on
//! each edge, so it is recovered exactly by interpolation and integrated in
//! closed form.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{MetrizedGraph, PointOnGraph};
use crate::scalar::{int, Scalar};

/// Polynomial in the arclength `x ∈ [0, L]` from endpoint A of `edge`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePolynomial {
    pub edge: usize,
    pub coeffs: Vec<Scalar>,
}

impl EdgePolynomial {
    pub fn constant(edge: usize, c: Scalar) -> Self {
        EdgePolynomial { edge, coeffs: vec![c] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = if self.coeffs.len() <= 1 {
            vec![Scalar::zero()]
        } else {
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect()
        };
        EdgePolynomial { edge: self.edge, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        EdgePolynomial { edge: self.edge, coeffs }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = EdgePolynomial::constant(self.edge, Scalar::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `∫_0^L`.
    pub fn integrate(&self, l: &Scalar) -> Scalar {
        let mut total = Scalar::zero();
        let mut lp = l.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                total += c * &lp / int(k as i64 + 1);
            }
            lp *= l;
        }
        total
    }
}

/// Interpolates `f` on `edge` through `degree + 1` interior samples at
/// offsets `k L/(degree+3)`, then checks one more sample.
pub fn fit_edge_function(
    g: &MetrizedGraph,
    edge: usize,
    f: &dyn Fn(&PointOnGraph) -> Result<Scalar>,
    degree: usize,
) -> Result<EdgePolynomial> {
    let l = g.edge(edge)?.length.clone();
    let denom = int(degree as i64 + 3);
    let xs: Vec<Scalar> = (1..=degree as i64 + 2).map(|k| &l * int(k) / &denom).collect();
    let ys: Vec<Scalar> = xs
        .iter()
        .map(|x| f(&PointOnGraph::on_edge(edge, x.clone())))
        .collect::<Result<_>>()?;
    let poly = EdgePolynomial { edge, coeffs: interpolate(&xs[..=degree], &ys[..=degree]) };
    if poly.eval(&xs[degree + 1]) != ys[degree + 1] {
        return Err(Error::NonPolynomialIntegrand { edge });
    }
    Ok(poly)
}

/// Newton divided differences, expanded into monomial coefficients.
fn interpolate(xs: &[Scalar], ys: &[Scalar]) -> Vec<Scalar> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut coeffs = vec![Scalar::zero(); n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![Scalar::zero(); n];
        for k in 0..n {
            if coeffs[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &coeffs[k];
            }
            next[k] -= &coeffs[k] * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    coeffs
}

/// The functions of `x` that can appear in an integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FnTag {
    /// `j_p(x,q)`
    JpXq,
    /// `j_q(x,p)`
    JqXp,
    /// `j_x(p,q)`
    JxPq,
    /// `r(p,x)`
    Rpx,
}


/// One factor `f^power` or `(f')^power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub tag: FnTag,
    pub derivative: bool,
    pub power: u32,
}

impl Term {
    pub fn f(tag: FnTag, power: u32) -> Self {
        Term { tag, derivative: false, power }
    }

    pub fn d(tag: FnTag, power: u32) -> Self {
        Term { tag, derivative: true, power }
    }
}

/// Pointwise value of `tag` at `x`, from the resistance matrix.
pub fn evaluate_tag(g: &MetrizedGraph, p: usize, q: usize, tag: FnTag, x: &PointOnGraph) -> Scalar {
    let m = g.resistance_matrix();
    let rpx = m.point_to_vertex(g, x, p);
    let rqx = m.point_to_vertex(g, x, q);
    let rpq = m.get(p, q);
    let half = |v: Scalar| v / int(2);
    match tag {
        FnTag::JpXq => half(&rpx + rpq - &rqx),
        FnTag::JqXp => half(&rqx + rpq - &rpx),
        FnTag::JxPq => half(&rpx + &rqx - rpq),
        FnTag::Rpx => rpx,
    }
}

/// Exact `∫_Γ Π terms dx` with `p`, `q` vertices.
///
/// Only `r(p,x)` and `r(q,x)` are sampled; the voltage functions are the
/// usual linear combinations of the two fitted polynomials.
pub fn integrate_product(g: &MetrizedGraph, p: usize, q: usize, terms: &[Term]) -> Result<Scalar> {
    g.check_vertex(p)?;
    g.check_vertex(q)?;
    let m = g.resistance_matrix();
    let rpq = m.get(p, q).clone();
    let needs_q = terms.iter().any(|t| t.tag != FnTag::Rpx);
    let mut total = Scalar::zero();
    for (i, e) in g.edges().iter().enumerate() {
        let rp = |x: &PointOnGraph| Ok(m.point_to_vertex(g, x, p));
        let rq = |x: &PointOnGraph| Ok(m.point_to_vertex(g, x, q));
        let fp = fit_edge_function(g, i, &rp, 2)?;
        let fq = if needs_q { Some(fit_edge_function(g, i, &rq, 2)?) } else { None };
        let mut product = EdgePolynomial::constant(i, Scalar::one());
        for t in terms {
            let base = match (t.tag, &fq) {
                (FnTag::Rpx, _) => fp.clone(),
                (tag, Some(fq)) => voltage_polynomial(tag, &fp, fq, &rpq),
                (_, None) => unreachable!("q fit exists whenever a voltage term does"),
            };
            let factor = if t.derivative { base.derivative() } else { base };
            product = product.mul(&factor.pow(t.power));
        }
        total += product.integrate(&e.length);
    }
    Ok(total)
}

/// `j_p(x,q) = (r(p,x) + r(p,q) - r(q,x))/2` and its relatives.
fn voltage_polynomial(tag: FnTag, fp: &EdgePolynomial, fq: &EdgePolynomial, rpq: &Scalar) -> EdgePolynomial {
    let (sp, sq, sc) = match tag {
        FnTag::JpXq => (1, -1, 1),
        FnTag::JqXp => (-1, 1, 1),
        FnTag::JxPq => (1, 1, -1),
        FnTag::Rpx => (2, 0, 0),
    };
    let half = |k: i64| Scalar::from(k) / Scalar::from(2);
    let (sp, sq, sc) = (half(sp), half(sq), half(sc));
    let len = fp.coeffs.len().max(fq.coeffs.len());
    let coeff = |f: &EdgePolynomial, k: usize| f.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero);
    let coeffs = (0..len)
        .map(|k| {
            let c = &sp * coeff(fp, k) + &sq * coeff(fq, k);
            if k == 0 {
                c + &sc * rpq
            } else {
                c
            }
        })
        .collect();
    EdgePolynomial { edge: fp.edge, coeffs }
}

/// `τ = (1/4) ∫ (d/dx r(x,p))^2 dx`.
pub fn tau_via_integral(g: &MetrizedGraph, p: usize) -> Result<Scalar> {
    Ok(integrate_product(g, p, p, &[Term::d(FnTag::Rpx, 2)])? / int(4))
}

/// `A_{p,q} = ∫ j_x(p,q) (d/dx j_p(x,q))^2 dx`; zero when `p = q`.
pub fn apq_direct(g: &MetrizedGraph, p: usize, q: usize) -> Result<Scalar> {
    if p == q {
        g.check_vertex(p)?;
        return Ok(Scalar::zero());
    }
    integrate_product(g, p, q, &[Term::f(FnTag::JxPq, 1), Term::d(FnTag::JpXq, 2)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::voltage;
    use crate::families;
    use crate::scalar::ratio;
    use proptest::prelude::*;

    #[test]
    fn polynomial_arithmetic() {
        let p = EdgePolynomial { edge: 0, coeffs: vec![int(1), int(2), int(3)] };
        assert_eq!(p.eval(&int(2)), int(17));
        assert_eq!(p.derivative().coeffs, vec![int(2), int(6)]);
        assert_eq!(p.integrate(&int(1)), int(3));
        assert_eq!(p.mul(&p).eval(&int(2)), int(289));
        assert_eq!(p.pow(0).coeffs, vec![int(1)]);
    }

    #[test]
    fn voltage_on_circle_edge_is_quadratic() {
        let g = families::circle_arcs(&int(1), &int(1));
        let f = |x: &PointOnGraph| voltage(&g, x, &PointOnGraph::Vertex(0), &PointOnGraph::Vertex(1));
        let poly = fit_edge_function(&g, 0, &f, 2).unwrap();
        // x(1-x)/2: zero at both ends, 1/8 at the middle
        assert_eq!(poly.coeffs, vec![int(0), ratio(1, 2), ratio(-1, 2)]);
    }

    #[test]
    fn undershoot_is_detected() {
        let g = families::circle_arcs(&int(1), &int(1));
        let f = |x: &PointOnGraph| Ok(evaluate_tag(&g, 0, 1, FnTag::JxPq, x));
        assert_eq!(fit_edge_function(&g, 0, &f, 1), Err(Error::NonPolynomialIntegrand { edge: 0 }));
    }

    #[test]
    fn off_path_edge_is_constant() {
        // pendant edge 1-3 hangs off the middle of the 0-2 path
        let g = crate::graph::build_graph(4, vec![(0, 1, int(1)), (1, 2, int(1)), (1, 3, int(1))]).unwrap();
        let f = |x: &PointOnGraph| Ok(evaluate_tag(&g, 0, 2, FnTag::JpXq, x));
        let poly = fit_edge_function(&g, 2, &f, 2).unwrap();
        assert_eq!(poly.degree(), 0);
        assert_eq!(poly.coeffs[0], g.resistance_matrix().get(0, 2) / int(2));
    }

    #[test]
    fn diamond_middle_edge_has_flat_voltage() {
        let g = families::diamond(&int(1));
        let (p, q) = families::diamond_poles();
        let f = |x: &PointOnGraph| Ok(evaluate_tag(&g, p, q, FnTag::JpXq, x));
        assert_eq!(fit_edge_function(&g, 4, &f, 2).unwrap().degree(), 0);
        assert_eq!(apq_direct(&g, p, q).unwrap(), ratio(1, 8));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(tau_via_integral(&families::circle(&int(1)), 0).unwrap(), ratio(1, 12));
        assert_eq!(tau_via_integral(&families::segment(&int(1)), 0).unwrap(), ratio(1, 4));
        assert_eq!(tau_via_integral(&families::complete(4, &ratio(1, 6)), 2).unwrap(), ratio(5, 96));
        let (a, b) = (ratio(1, 3), ratio(3, 4));
        let c = families::circle_arcs(&a, &b);
        let expect = &a * &a * &b * &b / (int(6) * (&a + &b) * (&a + &b));
        assert_eq!(apq_direct(&c, 0, 1).unwrap(), expect);
        let t = families::path(&[int(1), ratio(2, 3), int(5)]);
        assert_eq!(apq_direct(&t, 0, 3).unwrap(), int(0));
        assert_eq!(apq_direct(&t, 1, 1).unwrap(), int(0));
    }

    #[test]
    fn voltage_integrals_of_corollary() {
        let g = families::complete(4, &int(1));
        let r = g.resistance_matrix().get(0, 1).clone();
        let d = |n| integrate_product(&g, 0, 1, &[Term::d(FnTag::JpXq, 2), Term::f(FnTag::JpXq, n)]).unwrap();
        assert_eq!(d(0), r);
        assert_eq!(d(1), &r * &r / int(2));
        assert_eq!(d(2), &r * &r * &r / int(3));
        let orth = integrate_product(&g, 0, 1, &[Term::d(FnTag::JxPq, 1), Term::d(FnTag::JpXq, 1)]).unwrap();
        assert_eq!(orth, int(0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn integral_power_rule(seed in any::<u64>(), n in 0u32..4) {
            let g = families::random_connected_seeded(seed, 6, 10);
            let (p, q) = (0, g.vertex_count() - 1);
            let r = g.resistance_matrix().get(p, q).clone();
            let lhs = integrate_product(&g, p, q, &[Term::d(FnTag::JpXq, 2), Term::f(FnTag::JpXq, n)]).unwrap();
            let mut rhs = Scalar::one();
            for _ in 0..=n { rhs *= &r; }
            prop_assert_eq!(lhs, rhs / int(n as i64 + 1));
        }

        #[test]
        fn tau_integral_is_base_independent(seed in any::<u64>()) {
            let g = families::random_connected_seeded(seed, 6, 10);
            let t0 = tau_via_integral(&g, 0).unwrap();
            for p in 1..g.vertex_count() {
                prop_assert_eq!(&tau_via_integral(&g, p).unwrap(), &t0);
            }
        }

        #[test]
        fn fits_agree_with_point_insertion(seed in any::<u64>(), edge in 0usize..100) {
            let g = families::random_connected_seeded(seed, 5, 8);
            let i = edge % g.edge_count();
            let (p, q) = (0, g.vertex_count() - 1);
            let slow = |x: &PointOnGraph| voltage(&g, x, &PointOnGraph::Vertex(p), &PointOnGraph::Vertex(q));
            let fast = |x: &PointOnGraph| Ok(evaluate_tag(&g, p, q, FnTag::JxPq, x));
            prop_assert_eq!(fit_edge_function(&g, i, &slow, 2).unwrap(), fit_edge_function(&g, i, &fast, 2).unwrap());
        }
    }
}
