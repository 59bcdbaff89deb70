//! Polyanalytic polynomials of the form
//! `p(lambda) = sum_k (a_{2k} + a_{2k+1} lambda) |lambda|^{2k}`.
//!
//! The coefficient vector lives on the monomial ladder
//! `1, lambda, |lambda|^2, lambda |lambda|^2, |lambda|^4, ...`; the space of
//! degree index `j` has complex dimension `j+1` and can interpolate at most
//! two points per origin-centred circle. The antilinear action
//! `p -> lambda conj(p)` shifts the conjugated coefficients up by one slot,
//! which is what makes the three-term recurrence close within the class.

use crate::eig::real_poly_roots;
use crate::error::{Error, Result};
use crate::krylov::{cs_lanczos, JacobiMatrix};
use crate::ls::{solve_real_ls, RealMatrix};
use crate::mat::{DenseMatrix, DenseVector};
use crate::scalar::{cabs, cone, cr, czero, RealScalar, C};

#[derive(Clone, Debug, PartialEq)]
pub struct R2Polynomial<R: RealScalar> {
    coeffs: Vec<C<R>>,
}

impl<R: RealScalar> R2Polynomial<R> {
    /// From monomial-ladder coefficients `(a_0, ..., a_j)`.
    pub fn new(coeffs: Vec<C<R>>) -> Self {
        assert!(!coeffs.is_empty());
        R2Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        R2Polynomial {
            coeffs: vec![czero()],
        }
    }

    pub fn constant(a: C<R>) -> Self {
        R2Polynomial { coeffs: vec![a] }
    }

    pub fn coeffs(&self) -> &[C<R>] {
        &self.coeffs
    }

    pub fn degree_index(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self, tol: R) -> bool {
        self.coeffs.iter().all(|c| cabs(*c) <= tol)
    }

    /// Evaluate by Horner recursion in `x = |lambda|^2` over coefficient
    /// pairs `a_{2k} + a_{2k+1} lambda`.
    pub fn eval(&self, lambda: C<R>) -> C<R> {
        let x = cr(cabs(lambda) * cabs(lambda));
        let pairs = self.coeffs.len().div_ceil(2);
        let mut acc = czero();
        for k in (0..pairs).rev() {
            let even = self.coeffs[2 * k];
            let odd = if 2 * k + 1 < self.coeffs.len() {
                self.coeffs[2 * k + 1]
            } else {
                czero()
            };
            acc = acc * x + even + odd * lambda;
        }
        acc
    }

    /// The antilinear ladder action `lambda * conj(p)`: conjugate the
    /// coefficients and shift them up one monomial slot.
    pub fn conj_shift(&self) -> R2Polynomial<R> {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(czero());
        for c in &self.coeffs {
            out.push(c.conj());
        }
        R2Polynomial { coeffs: out }
    }

    /// Multiply by the radial factor `|lambda|^2 - m^2` (shifts pairs up).
    pub fn mul_radial(&self, m_squared: R) -> R2Polynomial<R> {
        let mut out = vec![czero(); self.coeffs.len() + 2];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 2] = out[i + 2] + *c;
            out[i] = out[i] - c.scale(m_squared);
        }
        R2Polynomial { coeffs: out }
    }

    pub fn add(&self, other: &R2Polynomial<R>) -> R2Polynomial<R> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![czero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = out[i] + *c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] = out[i] + *c;
        }
        R2Polynomial { coeffs: out }
    }

    pub fn scale(&self, s: C<R>) -> R2Polynomial<R> {
        R2Polynomial {
            coeffs: self.coeffs.iter().map(|c| *c * s).collect(),
        }
    }

    /// Split into ordinary polynomials with `p(l) = u(|l|^2) + l v(|l|^2)`.
    pub fn split_radial(&self) -> (Vec<C<R>>, Vec<C<R>>) {
        let mut u = Vec::new();
        let mut v = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % 2 == 0 {
                u.push(*c);
            } else {
                v.push(*c);
            }
        }
        if u.is_empty() {
            u.push(czero());
        }
        if v.is_empty() {
            v.push(czero());
        }
        (u, v)
    }
}

/// Finite node set with positive weights: the discrete measure carried by
/// the transported spectrum. At most two nodes may share a modulus and a
/// zero node may appear at most once.
#[derive(Clone, Debug)]
pub struct NodeSystem<R: RealScalar> {
    pub nodes: Vec<C<R>>,
    pub weights: Vec<R>,
}

impl<R: RealScalar> NodeSystem<R> {
    pub fn new(nodes: Vec<C<R>>, weights: Vec<R>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::InvalidNodeSystem(format!(
                "{} nodes, {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        for w in &weights {
            if !(*w > R::zero()) {
                return Err(Error::InvalidNodeSystem("weights must be positive".into()));
            }
        }
        let scale = nodes
            .iter()
            .fold(R::zero(), |acc, z| acc.max(cabs(*z)))
            .max(R::one());
        let dist_tol = R::from_f64(1e-12) * scale;
        for i in 0..nodes.len() {
            for j in 0..i {
                if cabs(nodes[i] - nodes[j]) <= dist_tol {
                    return Err(Error::InvalidNodeSystem(format!(
                        "duplicate nodes at index {j} and {i}"
                    )));
                }
            }
        }
        // group moduli: at most two per circle, zero at most once
        let mut moduli: Vec<R> = nodes.iter().map(|z| cabs(*z)).collect();
        moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mod_tol = R::from_f64(1e-9) * scale;
        let mut i = 0;
        while i < moduli.len() {
            let mut j = i + 1;
            while j < moduli.len() && moduli[j] - moduli[i] <= mod_tol {
                j += 1;
            }
            let count = j - i;
            if moduli[i] <= mod_tol && count > 1 {
                return Err(Error::InvalidNodeSystem(
                    "zero may appear as a node at most once".into(),
                ));
            }
            if count > 2 {
                return Err(Error::InvalidNodeSystem(format!(
                    "{count} nodes share modulus {:e}",
                    moduli[i].to_f64()
                )));
            }
            i = j;
        }
        Ok(NodeSystem { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same nodes with weights scaled to sum to one.
    pub fn normalized(&self) -> NodeSystem<R> {
        let mut total = R::zero();
        for w in &self.weights {
            total = total + *w;
        }
        NodeSystem {
            nodes: self.nodes.clone(),
            weights: self.weights.iter().map(|w| *w / total).collect(),
        }
    }
}

/// `<p, q> = sum_k p(l_k) conj(q(l_k)) w_k`.
pub fn discrete_inner_product<R: RealScalar>(
    p: &R2Polynomial<R>,
    q: &R2Polynomial<R>,
    ns: &NodeSystem<R>,
) -> C<R> {
    let mut s = czero();
    for (node, w) in ns.nodes.iter().zip(&ns.weights) {
        s = s + (p.eval(*node) * q.eval(*node).conj()).scale(*w);
    }
    s
}

///Jacobi matrix of the node system: the complex symmetric Lanczos process
/// run on `diag(nodes)` with the square-root weight vector.
pub fn node_jacobi<R: RealScalar>(ns: &NodeSystem<R>, order: usize) -> Result<JacobiMatrix<R>> {
    let n = ns.len();
    if order > n {
        return Err(Error::InvalidNodeSystem(format!(
            "requested order {order} exceeds node count {n}"
        )));
    }
    let normalized = ns.normalized();
    let d = DenseMatrix::diagonal(&normalized.nodes);
    let b = DenseVector::from_fn(n, |k| cr(normalized.weights[k].sqrt()));
    let fact = cs_lanczos(&d, &b, order, true)?;
    if let Some(step) = fact.breakdown_step {
        if step < order {
            return Err(Error::InvalidNodeSystem(format!(
                "orthogonal polynomial recurrence broke down at step {step}"
            )));
        }
    }
    Ok(fact.jacobi)
}

/// Values `p_0(lambda), ..., p_k(lambda)` of the orthonormal polynomials by
/// the three-term recurrence
/// `beta_j p_j = lambda conj(p_{j-1}) - alpha_j p_{j-1} - beta_{j-1} p_{j-2}`.
pub fn orthopoly_values<R: RealScalar>(
    jac: &JacobiMatrix<R>,
    lambda: C<R>,
    k: usize,
) -> Result<Vec<C<R>>> {
    if k >= jac.order() && k > 0 {
        return Err(Error::InvalidArgument(format!(
            "requested p_0..p_{k} from a Jacobi matrix of order {}",
            jac.order()
        )));
    }
    let mut out = Vec::with_capacity(k + 1);
    out.push(cone::<R>());
    for j in 1..=k {
        let mut w = lambda * out[j - 1].conj() - jac.alphas[j - 1] * out[j - 1];
        if j >= 2 {
            w = w - out[j - 2].scale(jac.betas[j - 2]);
        }
        out.push(w.scale(R::one() / jac.betas[j - 1]));
    }
    Ok(out)
}

/// Coefficient vectors of `p_0, ..., p_k`: the same recurrence propagated
/// through the ladder action on coefficients, so that `p_j` lands in the
/// degree-`j` class by construction.
pub fn orthopoly_polynomials<R: RealScalar>(
    jac: &JacobiMatrix<R>,
    k: usize,
) -> Result<Vec<R2Polynomial<R>>> {
    if k >= jac.order() && k > 0 {
        return Err(Error::InvalidArgument(format!(
            "requested p_0..p_{k} from a Jacobi matrix of order {}",
            jac.order()
        )));
    }
    let mut out: Vec<R2Polynomial<R>> = Vec::with_capacity(k + 1);
    out.push(R2Polynomial::constant(cone()));
    for j in 1..=k {
        let shifted = out[j - 1].conj_shift();
        let mut w = shifted.add(&out[j - 1].scale(-jac.alphas[j - 1]));
        if j >= 2 {
            w = w.add(&out[j - 2].scale(cr(-jac.betas[j - 2])));
        }
        out.push(w.scale(cr(R::one() / jac.betas[j - 1])));
    }
    Ok(out)
}

/// Interpolate the prescribed values on the node system by an element of
/// the degree-`(N-1)` class, through the orthonormal polynomial basis of
/// the discrete measure (a Vandermonde solve in the monomial ladder is not
/// numerically viable).
pub fn interpolate_r2<R: RealScalar>(
    ns: &NodeSystem<R>,
    values: &[C<R>],
) -> Result<R2Polynomial<R>> {
    let n = ns.len();
    if values.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} values for {} nodes",
            values.len(),
            n
        )));
    }
    let normalized = ns.normalized();
    let jac = node_jacobi(ns, n)?;
    let polys = orthopoly_polynomials(&jac, n - 1)?;
    // expansion coefficients <f, p_j> under the normalized measure
    let mut interp = R2Polynomial::zero();
    for p in &polys {
        let mut cj = czero();
        for ((node, w), f) in normalized.nodes.iter().zip(&normalized.weights).zip(values) {
            cj = cj + (*f * p.eval(*node).conj()).scale(*w);
        }
        interp = interp.add(&p.scale(cj));
    }
    // pad to the full class dimension
    let mut coeffs = interp.coeffs;
    coeffs.resize(n, czero());
    Ok(R2Polynomial::new(coeffs))
}

/// Location of the zero set of a polynomial on one modulus.
#[derive(Clone, Debug)]
pub enum ZeroKind<R: RealScalar> {
    /// A single zero at this modulus.
    Point(C<R>),
    /// Every number of this modulus is a zero.
    FullCircle,
}

#[derive(Clone, Debug)]
pub struct ZeroLocus<R: RealScalar> {
    pub modulus: R,
    pub kind: ZeroKind<R>,
}

fn poly_eval_real_arg<R: RealScalar>(coeffs: &[C<R>], x: R) -> C<R> {
    let mut acc = czero();
    for c in coeffs.iter().rev() {
        acc = acc.scale(x) + *c;
    }
    acc
}

/// Real-coefficient product `a(x) * conj(a)(x)` of a complex polynomial.
fn abs_squared_poly<R: RealScalar>(a: &[C<R>]) -> Vec<R> {
    let n = a.len();
    let mut out = vec![R::zero(); 2 * n - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, aj) in a.iter().enumerate() {
            let term = *ai * aj.conj();
            out[i + j] = out[i + j] + term.re;
        }
    }
    out
}

/// Zero structure: moduli at which the polynomial vanishes, each either a
/// point zero or a full circle. Candidate moduli are the nonnegative roots
/// of `|u(x)|^2 - x |v(x)|^2` (companion-matrix eigenvalues), then verified
/// by evaluation.
pub fn zero_moduli<R: RealScalar>(p: &R2Polynomial<R>) -> Result<Vec<ZeroLocus<R>>> {
    let cmax = p
        .coeffs
        .iter()
        .fold(R::zero(), |acc, c| acc.max(cabs(*c)));
    if cmax.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (u, v) = p.split_radial();
    let coeff_tol = R::from_f64(1e-12) * cmax;
    let v_is_zero = v.iter().all(|c| cabs(*c) <= coeff_tol);

    // q(x) = |u(x)|^2 - x |v(x)|^2, real coefficients
    let uu = abs_squared_poly(&u);
    let q: Vec<R> = if v_is_zero {
        uu
    } else {
        let vv = abs_squared_poly(&v);
        let mut q = vec![R::zero(); uu.len().max(vv.len() + 1)];
        for (i, c) in uu.iter().enumerate() {
            q[i] = q[i] + *c;
        }
        for (i, c) in vv.iter().enumerate() {
            q[i + 1] = q[i + 1] - *c;
        }
        q
    };

    let roots = match real_poly_roots(&q) {
        Ok(r) => r,
        Err(Error::ZeroPolynomial) => {
            // |u|^2 = x |v|^2 identically cannot happen for p != 0 unless
            // both are zero polynomials, which cmax > 0 excludes
            return Err(Error::ZeroPolynomial);
        }
        Err(e) => return Err(e),
    };

    // accept near-real nonnegative candidates, deduplicated; full-circle
    // moduli are double roots of q, so the filter is kept loose and the
    // classification below refines them
    let mut xs: Vec<R> = Vec::new();
    for z in roots {
        let s = R::one().max(cabs(z));
        if z.im.abs() > R::from_f64(1e-6) * s || z.re < -R::from_f64(1e-8) * s {
            continue;
        }
        let x = z.re.max(R::zero());
        if xs
            .iter()
            .all(|y| (*y - x).abs() > R::from_f64(1e-6) * R::one().max(x))
        {
            xs.push(x);
        }
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // evaluation scale of p on the circle of radius m
    let p_scale = |m: R| -> R {
        let mut s = R::zero();
        let mut pw = R::one();
        for (i, c) in p.coeffs.iter().enumerate() {
            if i % 2 == 1 {
                s = s + cabs(*c) * pw * m;
            } else {
                s = s + cabs(*c) * pw;
            }
            if i % 2 == 1 {
                pw = pw * m * m;
            }
        }
        s.max(R::eps())
    };

    let u_is_zero = u.iter().all(|c| cabs(*c) <= coeff_tol);
    let mut out: Vec<ZeroLocus<R>> = Vec::new();
    let push_unique = |out: &mut Vec<ZeroLocus<R>>, locus: ZeroLocus<R>| {
        let dup = out.iter().any(|l| {
            (l.modulus - locus.modulus).abs() <= R::from_f64(1e-8) * R::one().max(locus.modulus)
        });
        if !dup {
            out.push(locus);
        }
    };

    for x in xs {
        // full-circle attempt: a circle modulus is a simple root of u (or of
        // v when u vanishes identically), so Newton there restores the
        // precision that the double root of q destroyed
        let target = if u_is_zero { &v } else { &u };
        if let Some(xr) = newton_real_root(target, x) {
            if (xr - x).abs() <= R::from_f64(1e-4) * R::one().max(x) && xr >= -R::from_f64(1e-12) {
                let xr = xr.max(R::zero());
                let m = xr.sqrt();
                let scale = p_scale(m);
                let tight = R::from_f64(1e-8) * scale;
                let uval = poly_eval_real_arg(&u, xr);
                let vval = poly_eval_real_arg(&v, xr);
                if cabs(uval) <= tight && cabs(vval) * R::one().max(m) <= tight {
                    let probes = [
                        C::<R>::new(m, R::zero()),
                        C::<R>::new(-m, R::zero()),
                        C::<R>::new(R::zero(), m),
                    ];
                    if probes.iter().all(|z| cabs(p.eval(*z)) <= R::from_f64(1e-7) * scale) {
                        push_unique(&mut out, ZeroLocus {
                            modulus: m,
                            kind: ZeroKind::FullCircle,
                        });
                        continue;
                    }
                }
            }
        }

        // point zero: lambda = -u(x)/v(x) on the circle of radius sqrt(x)
        let m = x.sqrt();
        let scale = p_scale(m);
        let tol = R::from_f64(1e-7) * scale;
        let uval = poly_eval_real_arg(&u, x);
        let vval = poly_eval_real_arg(&v, x);
        if cabs(vval) > tol / R::one().max(m) {
            let lambda = -uval / vval;
            let mod_err = (cabs(lambda) - m).abs();
            if mod_err <= R::from_f64(1e-6) * R::one().max(m)
                && cabs(p.eval(lambda)) <= R::from_f64(10.0) * tol
            {
                push_unique(&mut out, ZeroLocus {
                    modulus: m,
                    kind: ZeroKind::Point(lambda),
                });
            }
        }
    }
    Ok(out)
}

/// Newton iteration on a complex-coefficient polynomial from a real start;
/// returns the real part when it converges to an essentially real root.
fn newton_real_root<R: RealScalar>(coeffs: &[C<R>], x0: R) -> Option<R> {
    let mut z = C::<R>::new(x0, R::zero());
    for _ in 0..12 {
        let mut val: C<R> = czero();
        let mut der: C<R> = czero();
        for c in coeffs.iter().rev() {
            der = der * z + val;
            val = val * z + *c;
        }
        let dn = cabs(der);
        if dn <= R::eps() {
            return None;
        }
        let step = val / der;
        z = z - step;
        if cabs(step) <= R::from_f64(1e-15) * R::one().max(cabs(z)) {
            break;
        }
    }
    if z.im.abs() <= R::from_f64(1e-8) * R::one().max(z.re.abs()) {
        Some(z.re)
    } else {
        None
    }
}

/// (full circles, points) counts of the zero structure.
pub fn zero_counts<R: RealScalar>(p: &R2Polynomial<R>) -> Result<(usize, usize)> {
    let loci = zero_moduli(p)?;
    let full = loci
        .iter()
        .filter(|l| matches!(l.kind, ZeroKind::FullCircle))
        .count();
    Ok((full, loci.len() - full))
}

/// Truncated exponential series
/// `sum_j (1/(2j)! + lambda/(2j+1)!) |lambda|^{2j}`.
pub fn exp_r2<R: RealScalar>(lambda: C<R>, terms: usize) -> C<R> {
    let x = cabs(lambda) * cabs(lambda);
    let mut acc = czero();
    let mut inv_even = R::one(); // 1/(2j)!
    let mut pw = R::one(); // x^j
    for j in 0..terms.max(1) {
        let inv_odd = inv_even / R::from_f64((2 * j + 1) as f64);
        acc = acc + (cr(inv_even) + lambda.scale(inv_odd)).scale(pw);
        inv_even = inv_odd / R::from_f64((2 * j + 2) as f64);
        pw = pw * x;
    }
    acc
}

/// Radial two-branch parameterization of an admissible curve: two continuous
/// branches `z_1(r), z_2(r)` with `|z_i(r)| = r` on `[r1, r2]`. Curves of
/// constant modulus are rejected (they meet a circle in more than two
/// points).
pub struct CurveSpec<R: RealScalar> {
    pub r1: R,
    pub r2: R,
    branch1: Box<dyn Fn(R) -> C<R> + Send + Sync>,
    branch2: Box<dyn Fn(R) -> C<R> + Send + Sync>,
    single_branch: bool,
}

impl<R: RealScalar> CurveSpec<R> {
    pub fn new(
        r1: R,
        r2: R,
        branch1: impl Fn(R) -> C<R> + Send + Sync + 'static,
        branch2: impl Fn(R) -> C<R> + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::build(r1, r2, Box::new(branch1), Box::new(branch2), false)
    }

    /// Degenerate one-branch mode (for example a segment of the real line).
    pub fn single_branch(
        r1: R,
        r2: R,
        branch: impl Fn(R) -> C<R> + Send + Sync + Clone + 'static,
    ) -> Result<Self> {
        let b2 = branch.clone();
        Self::build(r1, r2, Box::new(branch), Box::new(b2), true)
    }

    fn build(
        r1: R,
        r2: R,
        branch1: Box<dyn Fn(R) -> C<R> + Send + Sync>,
        branch2: Box<dyn Fn(R) -> C<R> + Send + Sync>,
        single_branch: bool,
    ) -> Result<Self> {
        if !(r2 > r1) || (r2 - r1) <= div_tol(r2) {
            return Err(Error::InadmissibleCurve(
                "constant-modulus curve meets a circle in more than two points".into(),
            ));
        }
        if r1 < R::zero() {
            return Err(Error::InadmissibleCurve("negative radius".into()));
        }
        let spec = CurveSpec {
            r1,
            r2,
            branch1,
            branch2,
            single_branch,
        };
        // |z_i(r)| = r on a sample grid
        let tol = R::from_f64(1e-12) * R::one().max(r2);
        for i in 0..=32 {
            let t = R::from_f64(i as f64 / 32.0);
            let r = r1 + (r2 - r1) * t;
            for z in [spec.z1(r), spec.z2(r)] {
                if (cabs(z) - r).abs() > tol {
                    return Err(Error::InadmissibleCurve(format!(
                        "branch leaves its circle at r = {:e}",
                        r.to_f64()
                    )));
                }
            }
        }
        Ok(spec)
    }

    pub fn z1(&self, r: R) -> C<R> {
        (self.branch1)(r)
    }

    pub fn z2(&self, r: R) -> C<R> {
        (self.branch2)(r)
    }

    pub fn is_single_branch(&self) -> bool {
        self.single_branch
    }
}

fn div_tol<R: RealScalar>(r2: R) -> R {
    R::from_f64(1e-10) * R::one().max(r2)
}

/// Least-squares fit of complex samples by a polynomial in the scaled
/// variable `(x - mid)/half`, returned as monomial coefficients in `x`.
fn fit_poly_in_x<R: RealScalar>(
    xs: &[R],
    ys: &[C<R>],
    degree: usize,
    mid: R,
    half: R,
) -> Result<Vec<C<R>>> {
    let rows = xs.len();
    let cols = degree + 1;
    let mut a = RealMatrix::<R>::zeros(rows, cols);
    for (i, x) in xs.iter().enumerate() {
        let t = (*x - mid) / half;
        let mut pw = R::one();
        for k in 0..cols {
            a[(i, k)] = pw;
            pw = pw * t;
        }
    }
    let re: Vec<R> = ys.iter().map(|y| y.re).collect();
    let im: Vec<R> = ys.iter().map(|y| y.im).collect();
    let sol_re = solve_real_ls(&a, &re)?;
    let sol_im = solve_real_ls(&a, &im)?;
    // expand sum c_k ((x - mid)/half)^k into monomials of x
    let mut mono = vec![czero(); cols];
    let mut basis = vec![R::zero(); cols]; // ((x - mid)/half)^k in monomials
    basis[0] = R::one();
    let mut deg_k = 0usize;
    for k in 0..cols {
        let ck = C::<R>::new(sol_re.x[k], sol_im.x[k]);
        for (i, b) in basis.iter().enumerate().take(deg_k + 1) {
            mono[i] = mono[i] + ck.scale(*b);
        }
        if k + 1 < cols {
            // basis <- basis * (x - mid)/half
            let mut next = vec![R::zero(); cols];
            for i in 0..=deg_k {
                next[i + 1] = next[i + 1] + basis[i] / half;
                next[i] = next[i] - basis[i] * mid / half;
            }
            basis = next;
            deg_k += 1;
        }
    }
    Ok(mono)
}

/// Approximate a continuous function on an admissible curve by an element
/// of the polynomial class: recover the radial components
/// `a_2(r) = (f(z2) - f(z1))/(z2 - z1)` and `a_1 = f(z1) - z1 a_2`, fit each
/// by an ordinary polynomial in `x = r^2` on a Chebyshev grid, and assemble
/// `p(z) = p1(|z|^2) + p2(|z|^2) z`. Near endpoints where the branches merge
/// the function is frozen at its endpoint value on a 2% radial collar.
///
/// Returns the polynomial and the sampled sup-norm error against `f`.
pub fn approx_on_curve<R: RealScalar>(
    curve: &CurveSpec<R>,
    f: impl Fn(C<R>) -> C<R>,
    degree: usize,
) -> Result<(R2Polynomial<R>, R)> {
    let samples = 4 * (degree + 1);
    let mid_r = (curve.r1 + curve.r2) * R::from_f64(0.5);
    let half_r = (curve.r2 - curve.r1) * R::from_f64(0.5);
    let collar = R::from_f64(0.02) * (curve.r2 - curve.r1);
    let dtol = div_tol(curve.r2);

    // merge behaviour at the endpoints
    let merge_at = |r: R| cabs(curve.z2(r) - curve.z1(r)) <= R::from_f64(1e-6) * R::one().max(curve.r2);
    let merge_lo = !curve.is_single_branch() && merge_at(curve.r1);
    let merge_hi = !curve.is_single_branch() && merge_at(curve.r2);
    let f_lo = f(curve.z1(curve.r1));
    let f_hi = f(curve.z1(curve.r2));

    let mut xs = Vec::with_capacity(samples);
    let mut a1s = Vec::with_capacity(samples);
    let mut a2s = Vec::with_capacity(samples);
    for i in 0..samples {
        // Chebyshev points in r
        let theta = std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * samples as f64);
        let r = mid_r + half_r * R::from_f64(theta.cos());
        let x = r * r;
        let (a1, a2);
        if curve.is_single_branch() {
            a1 = f(curve.z1(r));
            a2 = czero();
        } else if merge_lo && r - curve.r1 <= collar {
            a1 = f_lo;
            a2 = czero();
        } else if merge_hi && curve.r2 - r <= collar {
            a1 = f_hi;
            a2 = czero();
        } else {
            let z1 = curve.z1(r);
            let z2 = curve.z2(r);
            let d = z2 - z1;
            if cabs(d) < dtol {
                return Err(Error::InadmissibleCurve(format!(
                    "branches collapse at r = {:e} away from a merge point",
                    r.to_f64()
                )));
            }
            let slope = (f(z2) - f(z1)) / d;
            a2 = slope;
            a1 = f(z1) - z1 * slope;
        }
        xs.push(x);
        a1s.push(a1);
        a2s.push(a2);
    }

    let mid_x = (curve.r1 * curve.r1 + curve.r2 * curve.r2) * R::from_f64(0.5);
    let half_x = (curve.r2 * curve.r2 - curve.r1 * curve.r1) * R::from_f64(0.5);
    let p1 = fit_poly_in_x(&xs, &a1s, degree, mid_x, half_x)?;
    let p2 = fit_poly_in_x(&xs, &a2s, degree, mid_x, half_x)?;

    let mut coeffs = vec![czero(); 2 * degree + 2];
    for (k, c) in p1.iter().enumerate() {
        coeffs[2 * k] = *c;
    }
    for (k, c) in p2.iter().enumerate() {
        coeffs[2 * k + 1] = *c;
    }
    let p = R2Polynomial::new(coeffs);

    // sampled sup error against the true function on a denser grid
    let fine = 4 * samples;
    let mut err = R::zero();
    for i in 0..=fine {
        let t = R::from_f64(i as f64 / fine as f64);
        let r = curve.r1 + (curve.r2 - curve.r1) * t;
        for z in [curve.z1(r), curve.z2(r)] {
            err = err.max(cabs(f(z) - p.eval(z)));
        }
    }
    Ok((p, err))
}
