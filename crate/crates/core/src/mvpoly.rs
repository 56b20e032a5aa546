//! Sparse multivariate polynomial arithmetic over [`Rational`].
//!
//! Terms are keyed by exponent vectors in a `BTreeMap`, which fixes a
//! deterministic (lexicographic) term order used for iteration, display
//! and the leading term of the division algorithm. Coefficients are never
//! zero; the variable count is fixed at construction and every binary
//! operation requires both operands to agree on it.

use std::collections::BTreeMap;
use std::fmt;

use crate::rational::{ParseRationalError, Rational};

/// Errors from polynomial operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("operands have different variable sets ({left} vs {right} variables)")]
    VarMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    PointLengthMismatch { expected: usize, got: usize },
    #[error("division by the zero polynomial")]
    ZeroDivisor,
}

/// Parse error for the polynomial text format, with a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParsePolyError {
    pub line: usize,
    pub message: String,
}

impl ParsePolyError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParsePolyError {
            line,
            message: message.into(),
        }
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Equality compares the term maps only; variable names are display
/// metadata.
#[derive(Debug, Clone)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
    names: Option<Vec<String>>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
            names: None,
        }
    }

    pub fn constant(nvars: usize, value: Rational) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.insert_term(vec![0; nvars], value);
        p
    }

    /// The monomial `x_index` (exponent 1, coefficient 1).
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut exps = vec![0u32; nvars];
        exps[index] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.insert_term(exps, Rational::one());
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = MultiPoly::zero(nvars);
        for (exps, coeff) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length mismatch");
            p.insert_term(exps, coeff);
        }
        p
    }

    /// Attaches display names for the variables.
    pub fn with_names<S: Into<String>>(mut self, names: Vec<S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        assert_eq!(names.len(), self.nvars, "one name per variable");
        self.names = Some(names);
        self
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Coefficient of the given exponent vector (zero when absent).
    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `coeff * x^exps`, summing with any existing term and dropping
    /// the entry if the sum cancels.
    pub fn insert_term(&mut self, exps: Vec<u32>, coeff: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Highest exponent of `var`; the zero polynomial reports degree 0,
    /// distinguished by [`MultiPoly::is_zero`].
    pub fn degree(&self, var: usize) -> Result<usize, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::IndexOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        Ok(self
            .terms
            .keys()
            .map(|e| e[var] as usize)
            .max()
            .unwrap_or(0))
    }

    fn check_compat(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    fn merged_names(&self, other: &Self) -> Option<Vec<String>> {
        self.names.clone().or_else(|| other.names.clone())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compat(other)?;
        let mut out = self.clone();
        out.names = self.merged_names(other);
        for (e, c) in other.terms.iter() {
            out.insert_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compat(other)?;
        let mut out = MultiPoly::zero(self.nvars);
        out.names = self.merged_names(other);
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_term(exps, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return MultiPoly {
                nvars: self.nvars,
                terms: BTreeMap::new(),
                names: self.names.clone(),
            };
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * factor))
                .collect(),
            names: self.names.clone(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = MultiPoly::constant(self.nvars, Rational::one());
        for _ in 0..exp {
            out = out.checked_mul(self).expect("same variable set");
        }
        out
    }

    /// Replaces `var` by the polynomial `replacement` (same variable set);
    /// all other variables pass through.
    pub fn substitute(&self, var: usize, replacement: &Self) -> Result<Self, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::IndexOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        self.check_compat(replacement)?;
        let max_pow = self.degree(var)? as u32;
        // memoize replacement^k for k = 0..=max_pow
        let mut powers = Vec::with_capacity(max_pow as usize + 1);
        powers.push(MultiPoly::constant(self.nvars, Rational::one()));
        for k in 1..=max_pow {
            let next = powers[(k - 1) as usize].checked_mul(replacement)?;
            powers.push(next);
        }
        let mut out = MultiPoly::zero(self.nvars);
        out.names = self.names.clone();
        for (exps, coeff) in self.terms.iter() {
            let k = exps[var];
            let mut rest = exps.clone();
            rest[var] = 0;
            let mut base = MultiPoly::zero(self.nvars);
            base.insert_term(rest, coeff.clone());
            out = out.checked_add(&base.checked_mul(&powers[k as usize])?)?;
        }
        Ok(out)
    }

    pub fn eval_exact(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLengthMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (exps, coeff) in self.terms.iter() {
            let mut term = coeff.clone();
            for (v, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = term * &point[v];
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Double-precision evaluation, for numeric cross-checks only.
    pub fn eval_f64(&self, point: &[f64]) -> Result<f64, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLengthMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = 0.0;
        for (exps, coeff) in self.terms.iter() {
            let mut term = coeff.to_f64();
            for (v, &e) in exps.iter().enumerate() {
                term *= point[v].powi(e as i32);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Leading term under the lexicographic order fixed by the term map.
    fn leading_term(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.last_key_value()
    }

    /// Single-divisor polynomial division with lexicographic leading
    /// terms: returns `(q, r)` with `self = d*q + r` exactly, where no
    /// term of `r` is divisible by the leading monomial of `d`.
    pub fn exact_divide(&self, d: &Self) -> Result<(Self, Self), PolyError> {
        self.check_compat(d)?;
        let (dlt_exps, dlt_coeff) = match d.leading_term() {
            Some(lt) => (lt.0.clone(), lt.1.clone()),
            None => return Err(PolyError::ZeroDivisor),
        };
        let mut p = self.clone();
        let mut q = MultiPoly::zero(self.nvars);
        let mut r = MultiPoly::zero(self.nvars);
        q.names = self.names.clone();
        r.names = self.names.clone();
        while let Some((plt_exps, plt_coeff)) = p.leading_term() {
            let divisible = plt_exps.iter().zip(&dlt_exps).all(|(a, b)| a >= b);
            if divisible {
                let exps: Vec<u32> = plt_exps.iter().zip(&dlt_exps).map(|(a, b)| a - b).collect();
                let coeff = plt_coeff / &dlt_coeff;
                let mut t = MultiPoly::zero(self.nvars);
                t.insert_term(exps, coeff);
                p = p.checked_sub(&t.checked_mul(d)?)?;
                q = q.checked_add(&t)?;
            } else {
                let (exps, coeff) = (plt_exps.clone(), plt_coeff.clone());
                p.terms.remove(&exps);
                r.insert_term(exps, coeff);
            }
        }
        Ok((q, r))
    }

    /// Renders the text format: `nvars`, optional `names`, one `term`
    /// line per monomial in deterministic order.
    pub fn to_text(&self) -> String {
        let mut out = format!("nvars {}\n", self.nvars);
        if let Some(names) = &self.names {
            out.push_str("names ");
            out.push_str(&names.join(" "));
            out.push('\n');
        }
        for (exps, coeff) in self.terms.iter() {
            out.push_str(&format!("term {coeff}"));
            for e in exps {
                out.push_str(&format!(" {e}"));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the polynomial text format.
    ///
    /// ```text
    /// nvars <k>
    /// names <v1> ... <vk>        # optional, before any term
    /// term <rational> <e1> ... <ek>
    /// ```
    ///
    /// `#` starts a comment, blank lines are ignored, and duplicate
    /// exponent vectors are summed.
    pub fn parse_text(input: &str) -> Result<Self, ParsePolyError> {
        let mut poly: Option<MultiPoly> = None;
        let mut seen_term = false;
        for (idx, raw) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let keyword = fields.next().expect("nonempty line");
            let rest: Vec<&str> = fields.collect();
            match keyword {
                "nvars" => {
                    if poly.is_some() {
                        return Err(ParsePolyError::new(lineno, "duplicate nvars line"));
                    }
                    if rest.len() != 1 {
                        return Err(ParsePolyError::new(lineno, "expected: nvars <k>"));
                    }
                    let k: usize = rest[0].parse().map_err(|_| {
                        ParsePolyError::new(lineno, format!("invalid variable count {:?}", rest[0]))
                    })?;
                    poly = Some(MultiPoly::zero(k));
                }
                "names" => {
                    let p = poly.as_mut().ok_or_else(|| {
                        ParsePolyError::new(lineno, "names line before nvars line")
                    })?;
                    if seen_term {
                        return Err(ParsePolyError::new(lineno, "names line after first term"));
                    }
                    if p.names.is_some() {
                        return Err(ParsePolyError::new(lineno, "duplicate names line"));
                    }
                    if rest.len() != p.nvars {
                        return Err(ParsePolyError::new(
                            lineno,
                            format!("expected {} names, found {}", p.nvars, rest.len()),
                        ));
                    }
                    p.names = Some(rest.iter().map(|s| s.to_string()).collect());
                }
                "term" => {
                    let p = poly.as_mut().ok_or_else(|| {
                        ParsePolyError::new(lineno, "term line before nvars line")
                    })?;
                    if rest.len() != p.nvars + 1 {
                        return Err(ParsePolyError::new(
                            lineno,
                            format!(
                                "expected: term <rational> followed by {} exponents",
                                p.nvars
                            ),
                        ));
                    }
                    let coeff: Rational = rest[0]
                        .parse()
                        .map_err(|e: ParseRationalError| ParsePolyError::new(lineno, e.to_string()))?;
                    let mut exps = Vec::with_capacity(p.nvars);
                    for f in &rest[1..] {
                        let e: u32 = f.parse().map_err(|_| {
                            ParsePolyError::new(lineno, format!("invalid exponent {f:?}"))
                        })?;
                        exps.push(e);
                    }
                    p.insert_term(exps, coeff);
                    seen_term = true;
                }
                other => {
                    return Err(ParsePolyError::new(
                        lineno,
                        format!("unknown directive {other:?}"),
                    ));
                }
            }
        }
        poly.ok_or_else(|| ParsePolyError::new(1, "missing nvars line"))
    }

    fn var_name(&self, v: usize) -> String {
        match &self.names {
            Some(names) => names[v].clone(),
            None => format!("x{v}"),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // leading (lex-largest) terms first
        for (exps, coeff) in self.terms.iter().rev() {
            let neg = coeff.is_negative();
            let mag = coeff.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            for (v, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.var_name(v)),
                    _ => factors.push(format!("{}^{}", self.var_name(v), e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == Rational::one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &MultiPoly {
            type Output = MultiPoly;
            /// Panics on a variable-set mismatch; see the checked variant.
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$checked(rhs).expect("same variable set")
            }
        }
        impl std::ops::$trait for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&Rational::new(-1, 1))
    }
}

impl std::ops::Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}
