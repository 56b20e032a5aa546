//! Tensor-product Bernstein forms on boxes: exact basis conversion,
//! degree elevation, de Casteljau subdivision, range enclosure, and a
//! branch-and-bound nonnegativity certifier.
//!
//! The conversion route remaps the box to the unit cube exactly and then
//! applies the monomial-to-Bernstein change of basis one axis at a time,
//! so every coefficient is an exact rational. Corner coefficients equal
//! the polynomial values at the box corners, which is what makes corner
//! witnesses exact.

use num::bigint::BigInt;
use serde::Serialize;

use crate::mvpoly::MultiPoly;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BernsteinError {
    #[error("box has {box_dim} intervals but the polynomial has {poly_vars} variables")]
    DimensionMismatch { box_dim: usize, poly_vars: usize },
    #[error("degree {requested} for variable {var} is below the polynomial degree {actual}")]
    DegreeTooSmall {
        var: usize,
        requested: usize,
        actual: usize,
    },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("subdivision parameter {at} is outside (0, 1)")]
    SplitOutOfRange { at: Rational },
    #[error("interval {index} has lower bound {lo} not below upper bound {hi}")]
    EmptyInterval {
        index: usize,
        lo: Rational,
        hi: Rational,
    },
    #[error("box must have at least one interval")]
    EmptyBox,
    #[error("point has {got} coordinates, tensor has {expected}")]
    PointLengthMismatch { expected: usize, got: usize },
    #[error("degree list has {got} entries, polynomial has {expected} variables")]
    DegreeListLength { expected: usize, got: usize },
}

/// Parse error for the box text format, with a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseBoxError {
    pub line: usize,
    pub message: String,
}

/// An axis-aligned box with rational endpoints, `lo_i < hi_i` per axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalBox {
    intervals: Vec<(Rational, Rational)>,
}

impl IntervalBox {
    pub fn new(intervals: Vec<(Rational, Rational)>) -> Result<Self, BernsteinError> {
        if intervals.is_empty() {
            return Err(BernsteinError::EmptyBox);
        }
        for (i, (lo, hi)) in intervals.iter().enumerate() {
            if lo >= hi {
                return Err(BernsteinError::EmptyInterval {
                    index: i,
                    lo: lo.clone(),
                    hi: hi.clone(),
                });
            }
        }
        Ok(IntervalBox { intervals })
    }

    pub fn unit_cube(dim: usize) -> Self {
        IntervalBox::new(vec![(Rational::zero(), Rational::one()); dim])
            .expect("unit cube is valid")
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn lo(&self, axis: usize) -> &Rational {
        &self.intervals[axis].0
    }

    pub fn hi(&self, axis: usize) -> &Rational {
        &self.intervals[axis].1
    }

    pub fn width(&self, axis: usize) -> Rational {
        self.hi(axis) - self.lo(axis)
    }

    fn split(&self, axis: usize, at_abs: &Rational) -> (Self, Self) {
        let mut left = self.clone();
        let mut right = self.clone();
        left.intervals[axis].1 = at_abs.clone();
        right.intervals[axis].0 = at_abs.clone();
        (left, right)
    }

    /// Renders the single-line text format `box <lo1> <hi1> ...`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("box");
        for (lo, hi) in &self.intervals {
            out.push_str(&format!(" {lo} {hi}"));
        }
        out.push('\n');
        out
    }

    /// Parses `box <lo1> <hi1> <lo2> <hi2> ...`; `#` comments and blank
    /// lines are ignored.
    pub fn parse_text(input: &str) -> Result<Self, ParseBoxError> {
        let mut found: Option<(usize, Vec<Rational>)> = None;
        for (idx, raw) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            if fields.next() != Some("box") {
                return Err(ParseBoxError {
                    line: lineno,
                    message: "expected a line starting with \"box\"".into(),
                });
            }
            if found.is_some() {
                return Err(ParseBoxError {
                    line: lineno,
                    message: "duplicate box line".into(),
                });
            }
            let mut endpoints = Vec::new();
            for f in fields {
                let v: Rational = f.parse().map_err(|e| ParseBoxError {
                    line: lineno,
                    message: format!("{e}"),
                })?;
                endpoints.push(v);
            }
            if endpoints.is_empty() || endpoints.len() % 2 != 0 {
                return Err(ParseBoxError {
                    line: lineno,
                    message: format!(
                        "expected an even, positive number of endpoints, found {}",
                        endpoints.len()
                    ),
                });
            }
            found = Some((lineno, endpoints));
        }
        let (lineno, endpoints) = found.ok_or(ParseBoxError {
            line: 1,
            message: "missing box line".into(),
        })?;
        let intervals = endpoints
            .chunks(2)
            .map(|c| (c[0].clone(), c[1].clone()))
            .collect();
        IntervalBox::new(intervals).map_err(|e| ParseBoxError {
            line: lineno,
            message: format!("{e}"),
        })
    }
}

fn binom(n: usize, k: usize) -> BigInt {
    num::integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// The Bernstein basis polynomial `B_m^n(t) = C(n, m) t^m (1-t)^{n-m}`,
/// evaluated exactly.
pub fn bernstein_basis(n: usize, m: usize, t: &Rational) -> Rational {
    assert!(m <= n, "basis index out of range");
    let mut v = Rational::from_big(binom(n, m), BigInt::from(1));
    for _ in 0..m {
        v = v * t;
    }
    let omt = Rational::one() - t;
    for _ in 0..(n - m) {
        v = v * &omt;
    }
    v
}

/// Dense tensor of Bernstein coefficients over a box.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinTensor {
    degrees: Vec<usize>,
    coeffs: Vec<Rational>,
    domain: IntervalBox,
}

impl BernsteinTensor {
    /// Converts `p` to Bernstein form on `domain`. When `degrees` is
    /// omitted the exact per-variable degrees of `p` are used; explicit
    /// degrees may pad above them.
    pub fn from_poly(
        p: &MultiPoly,
        domain: &IntervalBox,
        degrees: Option<&[usize]>,
    ) -> Result<Self, BernsteinError> {
        let k = p.nvars();
        if k != domain.dim() {
            return Err(BernsteinError::DimensionMismatch {
                box_dim: domain.dim(),
                poly_vars: k,
            });
        }
        let natural: Vec<usize> = (0..k)
            .map(|v| p.degree(v).expect("var in range"))
            .collect();
        let degrees: Vec<usize> = match degrees {
            None => natural.clone(),
            Some(d) => {
                if d.len() != k {
                    return Err(BernsteinError::DegreeListLength {
                        expected: k,
                        got: d.len(),
                    });
                }
                for (v, (&req, &act)) in d.iter().zip(&natural).enumerate() {
                    if req < act {
                        return Err(BernsteinError::DegreeTooSmall {
                            var: v,
                            requested: req,
                            actual: act,
                        });
                    }
                }
                d.to_vec()
            }
        };

        // exact affine remap onto the unit cube: x_v -> lo_v + width_v t_v
        let mut remapped = p.clone();
        for v in 0..k {
            let affine = MultiPoly::constant(k, domain.lo(v).clone())
                .checked_add(&MultiPoly::var(k, v).scale(&domain.width(v)))
                .expect("same variable set");
            remapped = remapped.substitute(v, &affine).expect("var in range");
        }

        // dense monomial tensor
        let shape: Vec<usize> = degrees.iter().map(|d| d + 1).collect();
        let strides = strides_of(&shape);
        let total: usize = shape.iter().product();
        let mut data = vec![Rational::zero(); total];
        for (exps, coeff) in remapped.terms() {
            let flat: usize = exps
                .iter()
                .zip(&strides)
                .map(|(&e, &s)| e as usize * s)
                .sum();
            data[flat] = coeff.clone();
        }

        // per-axis monomial -> Bernstein basis change:
        // b_i = sum_{m<=i} C(i,m)/C(d,m) a_m
        for axis in 0..k {
            let d = degrees[axis];
            let mut ratio = vec![vec![Rational::zero(); d + 1]; d + 1];
            for i in 0..=d {
                for m in 0..=i {
                    ratio[i][m] = Rational::from_big(binom(i, m), binom(d, m));
                }
            }
            for base in line_bases(&shape, &strides, axis) {
                let line: Vec<Rational> = (0..=d)
                    .map(|m| data[base + m * strides[axis]].clone())
                    .collect();
                for i in 0..=d {
                    let mut acc = Rational::zero();
                    for (m, lm) in line.iter().enumerate().take(i + 1) {
                        if !lm.is_zero() {
                            acc = acc + &ratio[i][m] * lm;
                        }
                    }
                    data[base + i * strides[axis]] = acc;
                }
            }
        }

        Ok(BernsteinTensor {
            degrees,
            coeffs: data,
            domain: domain.clone(),
        })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn domain(&self) -> &IntervalBox {
        &self.domain
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn shape(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d + 1).collect()
    }

    /// Coefficient `b_I` for a multi-index `I`.
    pub fn coeff(&self, index: &[usize]) -> &Rational {
        let shape = self.shape();
        assert_eq!(index.len(), shape.len(), "index rank mismatch");
        for (v, (&i, &s)) in index.iter().zip(&shape).enumerate() {
            assert!(i < s, "index {i} out of range for axis {v}");
        }
        let strides = strides_of(&shape);
        let flat: usize = index.iter().zip(&strides).map(|(&i, &s)| i * s).sum();
        &self.coeffs[flat]
    }

    pub fn min_coeff(&self) -> &Rational {
        self.coeffs.iter().min().expect("tensor is never empty")
    }

    pub fn max_coeff(&self) -> &Rational {
        self.coeffs.iter().max().expect("tensor is never empty")
    }

    /// `[min_coeff, max_coeff]` — a guaranteed (generally not sharp)
    /// enclosure of the polynomial's range over the box.
    pub fn range_enclosure(&self) -> (Rational, Rational) {
        (self.min_coeff().clone(), self.max_coeff().clone())
    }

    /// Degree elevation by one along `var`: the same polynomial at degree
    /// `d+1`, each new coefficient a convex combination of neighbors.
    pub fn elevate(&self, var: usize) -> Result<Self, BernsteinError> {
        let k = self.degrees.len();
        if var >= k {
            return Err(BernsteinError::IndexOutOfRange {
                index: var,
                nvars: k,
            });
        }
        let d = self.degrees[var];
        let shape = self.shape();
        let strides = strides_of(&shape);
        let mut new_degrees = self.degrees.clone();
        new_degrees[var] = d + 1;
        let new_shape: Vec<usize> = new_degrees.iter().map(|x| x + 1).collect();
        let new_strides = strides_of(&new_shape);
        let total: usize = new_shape.iter().product();
        let mut out = vec![Rational::zero(); total];
        let np1 = Rational::from_int(d as i64 + 1);
        let old_bases = line_bases(&shape, &strides, var);
        let new_bases = line_bases(&new_shape, &new_strides, var);
        debug_assert_eq!(old_bases.len(), new_bases.len());
        for (&ob, &nb) in old_bases.iter().zip(&new_bases) {
            for i in 0..=(d + 1) {
                let mut acc = Rational::zero();
                if i >= 1 {
                    // (i / (d+1)) * b_{i-1}
                    acc = acc
                        + Rational::from_int(i as i64).checked_div(&np1).expect("nonzero")
                            * &self.coeffs[ob + (i - 1) * strides[var]];
                }
                if i <= d {
                    // ((d+1-i) / (d+1)) * b_i
                    acc = acc
                        + Rational::from_int((d + 1 - i) as i64)
                            .checked_div(&np1)
                            .expect("nonzero")
                            * &self.coeffs[ob + i * strides[var]];
                }
                out[nb + i * new_strides[var]] = acc;
            }
        }
        Ok(BernsteinTensor {
            degrees: new_degrees,
            coeffs: out,
            domain: self.domain.clone(),
        })
    }

    /// de Casteljau subdivision along `var` at the relative parameter
    /// `at ∈ (0, 1)`: two tensors representing the restriction of the
    /// same polynomial to the two sub-boxes.
    pub fn subdivide(
        &self,
        var: usize,
        at: &Rational,
    ) -> Result<(Self, Self), BernsteinError> {
        let k = self.degrees.len();
        if var >= k {
            return Err(BernsteinError::IndexOutOfRange {
                index: var,
                nvars: k,
            });
        }
        if !(at > &Rational::zero() && at < &Rational::one()) {
            return Err(BernsteinError::SplitOutOfRange { at: at.clone() });
        }
        let d = self.degrees[var];
        let shape = self.shape();
        let strides = strides_of(&shape);
        let mut left = self.coeffs.clone();
        let mut right = self.coeffs.clone();
        let omt = Rational::one() - at;
        for base in line_bases(&shape, &strides, var) {
            let mut row: Vec<Rational> = (0..=d)
                .map(|m| self.coeffs[base + m * strides[var]].clone())
                .collect();
            left[base] = row[0].clone();
            right[base + d * strides[var]] = row[d].clone();
            for r in 1..=d {
                for i in 0..=(d - r) {
                    row[i] = &omt * &row[i] + at * &row[i + 1];
                }
                left[base + r * strides[var]] = row[0].clone();
                right[base + (d - r) * strides[var]] = row[d - r].clone();
            }
        }
        let split_abs = self.domain.lo(var) + &(at * self.domain.width(var));
        let (lbox, rbox) = self.domain.split(var, &split_abs);
        Ok((
            BernsteinTensor {
                degrees: self.degrees.clone(),
                coeffs: left,
                domain: lbox,
            },
            BernsteinTensor {
                degrees: self.degrees.clone(),
                coeffs: right,
                domain: rbox,
            },
        ))
    }

    /// Exact evaluation of the represented polynomial at a rational
    /// point (given in box coordinates).
    pub fn eval_exact(&self, point: &[Rational]) -> Result<Rational, BernsteinError> {
        let k = self.degrees.len();
        if point.len() != k {
            return Err(BernsteinError::PointLengthMismatch {
                expected: k,
                got: point.len(),
            });
        }
        // per-axis basis values at the remapped parameter
        let mut basis: Vec<Vec<Rational>> = Vec::with_capacity(k);
        for v in 0..k {
            let t = (&point[v] - self.domain.lo(v))
                .checked_div(&self.domain.width(v))
                .expect("box width is positive");
            basis.push((0..=self.degrees[v]).map(|m| bernstein_basis(self.degrees[v], m, &t)).collect());
        }
        let shape = self.shape();
        let mut acc = Rational::zero();
        let mut index = vec![0usize; k];
        for coeff in &self.coeffs {
            if !coeff.is_zero() {
                let mut term = coeff.clone();
                for v in 0..k {
                    term = term * &basis[v][index[v]];
                }
                acc = acc + term;
            }
            // advance the row-major multi-index
            for v in (0..k).rev() {
                index[v] += 1;
                if index[v] < shape[v] {
                    break;
                }
                index[v] = 0;
            }
        }
        Ok(acc)
    }

    /// Multi-indices of the box corners (each coordinate 0 or the axis
    /// degree), in lexicographic order.
    pub fn corner_indices(&self) -> Vec<Vec<usize>> {
        let mut corners: Vec<Vec<usize>> = vec![vec![]];
        for &d in &self.degrees {
            let options: &[usize] = if d == 0 { &[0] } else { &[0, d] };
            let mut next = Vec::with_capacity(corners.len() * options.len());
            for c in &corners {
                for &o in options {
                    let mut c2 = c.clone();
                    c2.push(o);
                    next.push(c2);
                }
            }
            corners = next;
        }
        corners
    }

    /// The box point corresponding to a corner multi-index.
    pub fn corner_point(&self, index: &[usize]) -> Vec<Rational> {
        index
            .iter()
            .enumerate()
            .map(|(v, &i)| {
                if i == 0 {
                    self.domain.lo(v).clone()
                } else {
                    self.domain.hi(v).clone()
                }
            })
            .collect()
    }

    fn first_negative_corner(&self) -> Option<Witness> {
        for idx in self.corner_indices() {
            let c = self.coeff(&idx);
            if c.is_negative() {
                return Some(Witness {
                    point: self.corner_point(&idx),
                    value: c.clone(),
                });
            }
        }
        None
    }

    /// Axis with the widest coefficient spread (max minus min along the
    /// axis lines, maximized over lines); ties resolve to the smallest
    /// index.
    fn widest_spread_axis(&self) -> usize {
        let shape = self.shape();
        let strides = strides_of(&shape);
        let mut best_axis = 0;
        let mut best_spread = Rational::from_int(-1);
        for axis in 0..self.degrees.len() {
            let mut spread = Rational::zero();
            for base in line_bases(&shape, &strides, axis) {
                let mut lo: Option<&Rational> = None;
                let mut hi: Option<&Rational> = None;
                for m in 0..shape[axis] {
                    let v = &self.coeffs[base + m * strides[axis]];
                    if lo.map_or(true, |x| v < x) {
                        lo = Some(v);
                    }
                    if hi.map_or(true, |x| v > x) {
                        hi = Some(v);
                    }
                }
                let s = hi.unwrap() - lo.unwrap();
                if s > spread {
                    spread = s;
                }
            }
            if spread > best_spread {
                best_spread = spread;
                best_axis = axis;
            }
        }
        best_axis
    }
}

fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; shape.len()];
    for v in (0..shape.len().saturating_sub(1)).rev() {
        strides[v] = strides[v + 1] * shape[v + 1];
    }
    strides
}

/// Flat offsets of all positions whose coordinate along `axis` is zero —
/// one per tensor line parallel to `axis`.
fn line_bases(shape: &[usize], strides: &[usize], axis: usize) -> Vec<usize> {
    let mut bases = vec![0usize];
    for v in 0..shape.len() {
        if v == axis {
            continue;
        }
        let mut next = Vec::with_capacity(bases.len() * shape[v]);
        for &b in &bases {
            for i in 0..shape[v] {
                next.push(b + i * strides[v]);
            }
        }
        bases = next;
    }
    bases
}

/// Outcome status of a certification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    Nonnegative,
    NegativeWitness,
    Inconclusive,
}

/// An exact point where the polynomial is negative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub point: Vec<Rational>,
    pub value: Rational,
}

/// Result of [`certify_nonneg`]. Field names are the wire format of the
/// certificate JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub status: CertStatus,
    pub elevation: Vec<usize>,
    pub max_depth_used: usize,
    pub boxes_processed: u64,
    pub min_bernstein_coeff: Rational,
    pub max_bernstein_coeff: Rational,
    pub witness: Option<Witness>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = match self.status {
            CertStatus::Nonnegative => "nonnegative",
            CertStatus::NegativeWitness => "negative_witness",
            CertStatus::Inconclusive => "inconclusive",
        };
        out.push_str(&format!("status: {status}\n"));
        out.push_str(&format!(
            "elevation: [{}]\n",
            self.elevation
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&format!("max depth used: {}\n", self.max_depth_used));
        out.push_str(&format!("boxes processed: {}\n", self.boxes_processed));
        out.push_str(&format!(
            "bernstein coefficient range: [{}, {}]\n",
            self.min_bernstein_coeff, self.max_bernstein_coeff
        ));
        match &self.witness {
            None => out.push_str("witness: none\n"),
            Some(w) => {
                let pt = w
                    .point
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                out.push_str(&format!("witness: value {} at ({})\n", w.value, pt));
            }
        }
        out
    }
}

struct BnbState {
    max_depth: usize,
    boxes: u64,
    depth_used: usize,
    min: Option<Rational>,
    max: Option<Rational>,
    witness: Option<Witness>,
    any_inconclusive: bool,
}

impl BnbState {
    fn absorb_leaf(&mut self, t: &BernsteinTensor) {
        let (lo, hi) = t.range_enclosure();
        if self.min.as_ref().map_or(true, |m| &lo < m) {
            self.min = Some(lo);
        }
        if self.max.as_ref().map_or(true, |m| &hi > m) {
            self.max = Some(hi);
        }
    }

    fn visit(&mut self, t: &BernsteinTensor, depth: usize) {
        self.boxes += 1;
        self.depth_used = self.depth_used.max(depth);
        if !t.min_coeff().is_negative() {
            self.absorb_leaf(t);
            return;
        }
        if let Some(w) = t.first_negative_corner() {
            self.absorb_leaf(t);
            self.witness = Some(w);
            return;
        }
        if depth == self.max_depth {
            self.absorb_leaf(t);
            self.any_inconclusive = true;
            return;
        }
        let axis = t.widest_spread_axis();
        let half = Rational::new(1, 2);
        let (left, right) = t.subdivide(axis, &half).expect("valid split");
        self.visit(&left, depth + 1);
        if self.witness.is_some() {
            return;
        }
        self.visit(&right, depth + 1);
    }
}

/// Branch-and-bound nonnegativity certification of `p` over `domain`.
///
/// The polynomial is converted at its exact degrees; if any coefficient
/// is negative the tensor is first re-examined after up to
/// `max_elevation` rounds of degree elevation (one step in every
/// variable per round), then refined by midpoint bisection of the widest
/// coefficient spread down to `max_depth`. Negative box corners are
/// exact polynomial values and are reported as witnesses. The traversal
/// is sequential and left-to-right, so the certificate is deterministic.
///
/// The zero polynomial is certified nonnegative with a degenerate
/// certificate rather than treated as an error.
pub fn certify_nonneg(
    p: &MultiPoly,
    domain: &IntervalBox,
    max_depth: usize,
    max_elevation: usize,
) -> Result<Certificate, BernsteinError> {
    let k = domain.dim();
    if p.nvars() != k {
        return Err(BernsteinError::DimensionMismatch {
            box_dim: k,
            poly_vars: p.nvars(),
        });
    }
    if p.is_zero() {
        return Ok(Certificate {
            status: CertStatus::Nonnegative,
            elevation: vec![0; k],
            max_depth_used: 0,
            boxes_processed: 1,
            min_bernstein_coeff: Rational::zero(),
            max_bernstein_coeff: Rational::zero(),
            witness: None,
        });
    }

    let mut tensor = BernsteinTensor::from_poly(p, domain, None)?;
    let mut rounds = 0usize;
    loop {
        if !tensor.min_coeff().is_negative() {
            let (lo, hi) = tensor.range_enclosure();
            return Ok(Certificate {
                status: CertStatus::Nonnegative,
                elevation: vec![rounds; k],
                max_depth_used: 0,
                boxes_processed: 1,
                min_bernstein_coeff: lo,
                max_bernstein_coeff: hi,
                witness: None,
            });
        }
        if let Some(w) = tensor.first_negative_corner() {
            let (lo, hi) = tensor.range_enclosure();
            return Ok(Certificate {
                status: CertStatus::NegativeWitness,
                elevation: vec![rounds; k],
                max_depth_used: 0,
                boxes_processed: 1,
                min_bernstein_coeff: lo,
                max_bernstein_coeff: hi,
                witness: Some(w),
            });
        }
        if rounds == max_elevation {
            break;
        }
        for v in 0..k {
            tensor = tensor.elevate(v)?;
        }
        rounds += 1;
    }

    let mut state = BnbState {
        max_depth,
        boxes: 0,
        depth_used: 0,
        min: None,
        max: None,
        witness: None,
        any_inconclusive: false,
    };
    state.visit(&tensor, 0);
    let status = if state.witness.is_some() {
        CertStatus::NegativeWitness
    } else if state.any_inconclusive {
        CertStatus::Inconclusive
    } else {
        CertStatus::Nonnegative
    };
    Ok(Certificate {
        status,
        elevation: vec![rounds; k],
        max_depth_used: state.depth_used,
        boxes_processed: state.boxes,
        min_bernstein_coeff: state.min.expect("at least one leaf"),
        max_bernstein_coeff: state.max.expect("at least one leaf"),
        witness: state.witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn univar(coeffs: &[(i64, i64, u32)]) -> MultiPoly {
        MultiPoly::from_terms(1, coeffs.iter().map(|&(n, d, e)| (vec![e], r(n, d))))
    }

    fn tensor1(coeffs: &[Rational], domain: IntervalBox) -> BernsteinTensor {
        BernsteinTensor {
            degrees: vec![coeffs.len() - 1],
            coeffs: coeffs.to_vec(),
            domain,
        }
    }

    #[test]
    fn box_validation_and_text() {
        assert!(matches!(
            IntervalBox::new(vec![(r(1, 1), r(1, 1))]),
            Err(BernsteinError::EmptyInterval { .. })
        ));
        let b = IntervalBox::new(vec![(r(0, 1), r(2, 1)), (r(0, 1), r(1, 1))]).unwrap();
        let text = b.to_text();
        assert_eq!(text, "box 0 2 0 1\n");
        assert_eq!(IntervalBox::parse_text(&text).unwrap(), b);
        let err = IntervalBox::parse_text("# c\nbox 0 1 0\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(IntervalBox::parse_text("").is_err());
    }

    #[test]
    fn constant_polynomial_has_constant_tensor() {
        let p = MultiPoly::constant(3, r(288, 1));
        let cube = IntervalBox::unit_cube(3);
        let t = BernsteinTensor::from_poly(&p, &cube, Some(&[4, 3, 2])).unwrap();
        assert_eq!(t.coeffs().len(), 60);
        assert!(t.coeffs().iter().all(|c| *c == r(288, 1)));
    }

    #[test]
    fn linear_tensor_interpolates_endpoints() {
        let p = univar(&[(1, 1, 1)]); // t
        let cube = IntervalBox::unit_cube(1);
        let t = BernsteinTensor::from_poly(&p, &cube, None).unwrap();
        assert_eq!(t.coeffs(), &[r(0, 1), r(1, 1)]);
    }

    #[test]
    fn degree_too_small_is_an_error() {
        let p = univar(&[(1, 1, 2)]);
        let cube = IntervalBox::unit_cube(1);
        assert!(matches!(
            BernsteinTensor::from_poly(&p, &cube, Some(&[1])),
            Err(BernsteinError::DegreeTooSmall { var: 0, requested: 1, actual: 2 })
        ));
    }

    #[test]
    fn elevation_examples() {
        // t^2 at degree 2 has coefficients (0, 0, 1); at degree 3, (0, 0, 1/3, 1)
        let t = tensor1(&[r(0, 1), r(0, 1), r(1, 1)], IntervalBox::unit_cube(1));
        let e = t.elevate(0).unwrap();
        assert_eq!(e.coeffs(), &[r(0, 1), r(0, 1), r(1, 3), r(1, 1)]);
        // linear (0, 1) elevates to (0, 1/2, 1)
        let t = tensor1(&[r(0, 1), r(1, 1)], IntervalBox::unit_cube(1));
        assert_eq!(t.elevate(0).unwrap().coeffs(), &[r(0, 1), r(1, 2), r(1, 1)]);
        // constants stay constant
        let t = tensor1(&[r(5, 1), r(5, 1)], IntervalBox::unit_cube(1));
        assert!(t.elevate(0).unwrap().coeffs().iter().all(|c| *c == r(5, 1)));
        assert!(t.elevate(1).is_err());
    }

    #[test]
    fn subdivision_examples() {
        // (u - 1/2)^2: coefficients (1/4, -1/4, 1/4)
        let t = tensor1(
            &[r(1, 4), r(-1, 4), r(1, 4)],
            IntervalBox::unit_cube(1),
        );
        let (l, rt) = t.subdivide(0, &r(1, 2)).unwrap();
        assert_eq!(l.coeffs(), &[r(1, 4), r(0, 1), r(0, 1)]);
        assert_eq!(rt.coeffs(), &[r(0, 1), r(0, 1), r(1, 4)]);
        assert_eq!(l.domain(), &IntervalBox::new(vec![(r(0, 1), r(1, 2))]).unwrap());
        assert_eq!(rt.domain(), &IntervalBox::new(vec![(r(1, 2), r(1, 1))]).unwrap());
        // linear (0, 1) splits at 1/2 into (0, 1/2) and (1/2, 1)
        let t = tensor1(&[r(0, 1), r(1, 1)], IntervalBox::unit_cube(1));
        let (l, rt) = t.subdivide(0, &r(1, 2)).unwrap();
        assert_eq!(l.coeffs(), &[r(0, 1), r(1, 2)]);
        assert_eq!(rt.coeffs(), &[r(1, 2), r(1, 1)]);
        // parameter must be interior
        assert!(matches!(
            t.subdivide(0, &r(1, 1)),
            Err(BernsteinError::SplitOutOfRange { .. })
        ));
    }

    #[test]
    fn enclosure_of_shifted_square() {
        let t = tensor1(
            &[r(1, 4), r(-1, 4), r(1, 4)],
            IntervalBox::unit_cube(1),
        );
        assert_eq!(t.range_enclosure(), (r(-1, 4), r(1, 4)));
        let c = tensor1(&[r(5, 1)], IntervalBox::unit_cube(1));
        assert_eq!(c.range_enclosure(), (r(5, 1), r(5, 1)));
    }

    #[test]
    fn eval_matches_source_polynomial_off_unit_box() {
        // p(x) = 3x^2 - 2x + 1 on [-1, 3]
        let p = univar(&[(3, 1, 2), (-2, 1, 1), (1, 1, 0)]);
        let domain = IntervalBox::new(vec![(r(-1, 1), r(3, 1))]).unwrap();
        let t = BernsteinTensor::from_poly(&p, &domain, None).unwrap();
        for pt in [r(-1, 1), r(0, 1), r(1, 3), r(5, 2), r(3, 1)] {
            assert_eq!(
                t.eval_exact(&[pt.clone()]).unwrap(),
                p.eval_exact(&[pt]).unwrap()
            );
        }
    }

    #[test]
    fn certify_examples() {
        // u - 1 on [0, 1]: negative corner at u = 0
        let p = univar(&[(1, 1, 1), (-1, 1, 0)]);
        let cube = IntervalBox::unit_cube(1);
        let cert = certify_nonneg(&p, &cube, 0, 0).unwrap();
        assert_eq!(cert.status, CertStatus::NegativeWitness);
        let w = cert.witness.unwrap();
        assert_eq!(w.point, vec![r(0, 1)]);
        assert_eq!(w.value, r(-1, 1));
        assert_eq!(cert.boxes_processed, 1);

        // (u - 1/2)^2 needs one level of subdivision
        let p = univar(&[(1, 1, 2), (-1, 1, 1), (1, 4, 0)]);
        let cert = certify_nonneg(&p, &cube, 0, 0).unwrap();
        assert_eq!(cert.status, CertStatus::Inconclusive);
        assert_eq!(cert.min_bernstein_coeff, r(-1, 4));
        let cert = certify_nonneg(&p, &cube, 1, 0).unwrap();
        assert_eq!(cert.status, CertStatus::Nonnegative);
        assert_eq!(cert.max_depth_used, 1);
        assert_eq!(cert.boxes_processed, 3);

        // zero polynomial certifies trivially
        let cert = certify_nonneg(&MultiPoly::zero(1), &cube, 0, 0).unwrap();
        assert_eq!(cert.status, CertStatus::Nonnegative);
        assert_eq!(cert.boxes_processed, 1);
        assert_eq!(cert.min_bernstein_coeff, r(0, 1));
    }

    #[test]
    fn certificate_json_field_names() {
        let p = univar(&[(1, 1, 1), (-1, 1, 0)]);
        let cube = IntervalBox::unit_cube(1);
        let cert = certify_nonneg(&p, &cube, 0, 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
        assert_eq!(v["status"], "negative_witness");
        assert_eq!(v["elevation"], serde_json::json!([0]));
        assert_eq!(v["max_depth_used"], 0);
        assert_eq!(v["boxes_processed"], 1);
        assert_eq!(v["min_bernstein_coeff"], "-1");
        assert_eq!(v["max_bernstein_coeff"], "0");
        assert_eq!(v["witness"]["point"], serde_json::json!(["0"]));
        assert_eq!(v["witness"]["value"], "-1");

        let cert = certify_nonneg(&univar(&[(1, 1, 0)]), &cube, 0, 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
        assert_eq!(v["status"], "nonnegative");
        assert_eq!(v["witness"], serde_json::Value::Null);
    }
}
