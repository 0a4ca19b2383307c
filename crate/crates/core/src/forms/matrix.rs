//! Square matrices of expressions and of forms.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::expr::Expr;
use super::form::{Bidegree, Form};
use super::FormsError;

#[derive(Clone, Debug, PartialEq)]
pub struct ExprMatrix {
    n: usize,
    entries: Vec<Expr>,
}

impl ExprMatrix {
    /// Row-major entries.
    pub fn new(n: usize, entries: Vec<Expr>) -> Result<Self, FormsError> {
        if n == 0 || entries.len() != n * n {
            return Err(FormsError::Shape(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        Ok(ExprMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Expr>>) -> Result<Self, FormsError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(FormsError::Shape("matrix rows must have equal length and be square".into()));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn scalar(e: Expr) -> Self {
        ExprMatrix { n: 1, entries: vec![e] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag((0..n).map(|_| Expr::one()).collect())
    }

    pub fn diag(d: Vec<Expr>) -> Self {
        let n = d.len();
        let mut entries = vec![Expr::zero(); n * n];
        for (k, e) in d.into_iter().enumerate() {
            entries[k * n + k] = e;
        }
        ExprMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &Expr {
        &self.entries[r * self.n + c]
    }

    pub fn rows(&self) -> Vec<Vec<Expr>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn entries(&self) -> &[Expr] {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        ExprMatrix { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    fn zip(&self, o: &ExprMatrix, f: impl Fn(&Expr, &Expr) -> Expr) -> Self {
        assert_eq!(self.n, o.n, "matrix size mismatch");
        ExprMatrix { n: self.n, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, o: &ExprMatrix) -> Self {
        self.zip(o, Expr::add)
    }

    pub fn sub(&self, o: &ExprMatrix) -> Self {
        self.zip(o, Expr::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(Expr::neg)
    }

    pub fn scale(&self, s: &Expr) -> Self {
        self.map(|e| s.mul(e))
    }

    pub fn mul(&self, o: &ExprMatrix) -> Self {
        assert_eq!(self.n, o.n, "matrix size mismatch");
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(Expr::sum((0..n).map(|k| self.get(r, k).mul(o.get(k, c)))));
            }
        }
        ExprMatrix { n, entries }
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(self.get(c, r).clone());
            }
        }
        ExprMatrix { n, entries }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(Expr::conj)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.conj().transpose()
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> ExprMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for r in (0..n).filter(|&r| r != skip_r) {
            for c in (0..n).filter(|&c| c != skip_c) {
                entries.push(self.get(r, c).clone());
            }
        }
        ExprMatrix { n: n - 1, entries }
    }

    /// Cofactor expansion; intended for the small ranks used here.
    pub fn det(&self) -> Expr {
        match self.n {
            1 => self.entries[0].clone(),
            2 => self.get(0, 0).mul(self.get(1, 1)).sub(&self.get(0, 1).mul(self.get(1, 0))),
            n => Expr::sum((0..n).filter(|&c| !self.get(0, c).is_zero()).map(|c| {
                let t = self.get(0, c).mul(&self.minor(0, c).det());
                if c % 2 == 0 {
                    t
                } else {
                    t.neg()
                }
            })),
        }
    }

    /// Adjugate divided by the determinant.
    pub fn inverse(&self) -> Result<Self, FormsError> {
        let det = self.det();
        if det.is_zero() {
            return Err(FormsError::Shape("matrix is singular".into()));
        }
        let n = self.n;
        if n == 1 {
            return Ok(ExprMatrix::scalar(det.recip()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let cof = self.minor(c, r).det();
                let cof = if (r + c) % 2 == 0 { cof } else { cof.neg() };
                entries.push(cof.div(&det));
            }
        }
        Ok(ExprMatrix { n, entries })
    }

    pub fn trace(&self) -> Expr {
        Expr::sum((0..self.n).map(|k| self.get(k, k).clone()))
    }

    pub fn subst(&self, t: &Expr) -> Self {
        self.map(|e| e.subst(t))
    }

    pub fn wirtinger(&self) -> (Self, Self) {
        let (a, b): (Vec<_>, Vec<_>) = self.entries.iter().map(Expr::wirtinger).unzip();
        (ExprMatrix { n: self.n, entries: a }, ExprMatrix { n: self.n, entries: b })
    }

    pub fn kron(&self, o: &ExprMatrix) -> Self {
        let (n, m) = (self.n, o.n);
        let mut entries = Vec::with_capacity(n * n * m * m);
        for r in 0..n * m {
            for c in 0..n * m {
                entries.push(self.get(r / m, c / m).mul(o.get(r % m, c % m)));
            }
        }
        ExprMatrix { n: n * m, entries }
    }

    pub fn block_diag(&self, o: &ExprMatrix) -> Self {
        let n = self.n + o.n;
        let mut entries = vec![Expr::zero(); n * n];
        for r in 0..self.n {
            for c in 0..self.n {
                entries[r * n + c] = self.get(r, c).clone();
            }
        }
        for r in 0..o.n {
            for c in 0..o.n {
                entries[(self.n + r) * n + self.n + c] = o.get(r, c).clone();
            }
        }
        ExprMatrix { n, entries }
    }

    pub fn is_holomorphic(&self) -> bool {
        self.entries.iter().all(Expr::is_holomorphic)
    }

    pub fn eval(&self, p: Complex64) -> Result<DMatrix<Complex64>, FormsError> {
        let vals = self.entries.iter().map(|e| e.eval(p)).collect::<Result<Vec<_>, _>>()?;
        Ok(DMatrix::from_row_slice(self.n, self.n, &vals))
    }

    pub fn exact_eq(&self, o: &ExprMatrix) -> Result<bool, FormsError> {
        if self.n != o.n {
            return Ok(false);
        }
        for (a, b) in self.entries.iter().zip(&o.entries) {
            if !super::normal::equal(a, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Smallest eigenvalue of a numerically hermitian matrix, or `None` if the
/// hermitian defect exceeds `tol` relative to the matrix size.
pub fn min_hermitian_eigenvalue(m: &DMatrix<Complex64>, tol: f64) -> Option<f64> {
    let scale = m.iter().fold(1.0f64, |a, x| a.max(x.norm()));
    let defect = (m - m.adjoint()).iter().fold(0.0f64, |a, x| a.max(x.norm()));
    if defect > tol * scale {
        return None;
    }
    let herm = (m + m.adjoint()).map(|x| x * 0.5);
    let eig = nalgebra::SymmetricEigen::new(herm);
    eig.eigenvalues.iter().copied().reduce(f64::min)
}

/// Square matrix of forms.
#[derive(Clone, Debug, PartialEq)]
pub struct FormMatrix {
    n: usize,
    entries: Vec<Form>,
}

impl FormMatrix {
    pub fn zero(n: usize) -> Self {
        FormMatrix { n, entries: vec![Form::zero(); n * n] }
    }

    pub fn scalar(f: Form) -> Self {
        FormMatrix { n: 1, entries: vec![f] }
    }

    /// Matrix of homogeneous forms of bidegree `b` with coefficients `m`.
    pub fn homogeneous(b: Bidegree, m: &ExprMatrix) -> Self {
        FormMatrix { n: m.n, entries: m.entries.iter().map(|e| Form::homogeneous(b, e.clone())).collect() }
    }

    pub fn from_entries(n: usize, entries: Vec<Form>) -> Result<Self, FormsError> {
        if n == 0 || entries.len() != n * n {
            return Err(FormsError::Shape(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        Ok(FormMatrix { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &Form {
        &self.entries[r * self.n + c]
    }

    pub fn entries(&self) -> &[Form] {
        &self.entries
    }

    /// The single entry of a 1×1 matrix.
    pub fn as_scalar(&self) -> Option<&Form> {
        (self.n == 1).then(|| &self.entries[0])
    }

    /// Coefficient matrix of bidegree `b`.
    pub fn coeffs(&self, b: Bidegree) -> ExprMatrix {
        ExprMatrix { n: self.n, entries: self.entries.iter().map(|f| f.coeff(b)).collect() }
    }

    pub fn map(&self, f: impl Fn(&Form) -> Form) -> Self {
        FormMatrix { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn add(&self, o: &FormMatrix) -> Self {
        assert_eq!(self.n, o.n, "matrix size mismatch");
        FormMatrix { n: self.n, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(Form::neg)
    }

    pub fn sub(&self, o: &FormMatrix) -> Self {
        self.add(&o.neg())
    }

    /// `a · self`.
    pub fn left_mul(&self, a: &ExprMatrix) -> Self {
        assert_eq!(self.n, a.n, "matrix size mismatch");
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Form::zero();
                for k in 0..n {
                    acc = acc.add(&self.get(k, c).scale(a.get(r, k)));
                }
                entries.push(acc);
            }
        }
        FormMatrix { n, entries }
    }

    /// `self · a`.
    pub fn right_mul(&self, a: &ExprMatrix) -> Self {
        assert_eq!(self.n, a.n, "matrix size mismatch");
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Form::zero();
                for k in 0..n {
                    acc = acc.add(&self.get(r, k).scale(a.get(k, c)));
                }
                entries.push(acc);
            }
        }
        FormMatrix { n, entries }
    }

    /// `g · self · g_inv`.
    pub fn conjugate(&self, g: &ExprMatrix, g_inv: &ExprMatrix) -> Self {
        self.left_mul(g).right_mul(g_inv)
    }

    pub fn trace(&self) -> Form {
        (0..self.n).fold(Form::zero(), |acc, k| acc.add(self.get(k, k)))
    }

    pub fn delbar(&self) -> Self {
        self.map(Form::delbar)
    }

    pub fn del(&self) -> Self {
        self.map(Form::del)
    }

    pub fn pullback(&self, t: &Expr) -> Self {
        self.map(|f| f.pullback(t))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Form::is_zero)
    }

    pub fn exact_eq(&self, o: &FormMatrix) -> Result<bool, FormsError> {
        if self.n != o.n {
            return Ok(false);
        }
        for (a, b) in self.entries.iter().zip(&o.entries) {
            if !a.exact_eq(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn exact_zero(&self) -> Result<bool, FormsError> {
        for f in &self.entries {
            if !f.exact_zero()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn max_norm(&self, points: &[Complex64]) -> Result<f64, FormsError> {
        let mut worst: f64 = 0.0;
        for f in &self.entries {
            worst = worst.max(f.max_norm(points)?);
        }
        Ok(worst)
    }

    pub fn max_deviation(&self, o: &FormMatrix, points: &[Complex64]) -> Result<f64, FormsError> {
        self.sub(o).max_norm(points)
    }

    pub fn real_structure_residual(&self, points: &[Complex64]) -> Result<f64, FormsError> {
        let mut worst: f64 = 0.0;
        for f in &self.entries {
            worst = worst.max(f.real_structure_residual(points)?);
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn inverse_is_exact() {
        let z = Expr::z();
        let m = ExprMatrix::from_rows(vec![
            vec![z.powi(-2), z.powi(-2).mul(&z.add(&Expr::real(3.0)))],
            vec![Expr::zero(), z.powi(-1)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).exact_eq(&ExprMatrix::identity(2)).unwrap());
        let m3 = ExprMatrix::from_rows(vec![
            vec![Expr::real(2.0), z.clone(), Expr::zero()],
            vec![Expr::zero(), Expr::one(), Expr::zbar()],
            vec![Expr::one(), Expr::zero(), Expr::real(3.0)],
        ])
        .unwrap();
        let p = c(0.3, -0.7);
        let prod = m3.inverse().unwrap().mul(&m3).eval(p).unwrap();
        assert!((prod - DMatrix::<Complex64>::identity(3, 3)).norm() < 1e-13);
    }

    #[test]
    fn kron_and_trace() {
        let a = ExprMatrix::diag(vec![Expr::real(2.0), Expr::real(3.0)]);
        let b = ExprMatrix::diag(vec![Expr::real(5.0), Expr::real(7.0)]);
        let k = a.kron(&b);
        assert_eq!(k.dim(), 4);
        assert_eq!(k.trace().as_const(), Some(c(10.0 + 14.0 + 15.0 + 21.0, 0.0)));
        assert_eq!(a.kron(&b).det().as_const(), a.det().powi(2).mul(&b.det().powi(2)).as_const());
    }

    #[test]
    fn positivity() {
        let h = ExprMatrix::from_rows(vec![vec![Expr::real(2.0), Expr::i()], vec![Expr::i().neg(), Expr::real(2.0)]]).unwrap();
        let m = h.eval(c(0.0, 0.0)).unwrap();
        let lo = min_hermitian_eigenvalue(&m, 1e-12).unwrap();
        assert!((lo - 1.0).abs() < 1e-12);
        let nonherm = ExprMatrix::from_rows(vec![vec![Expr::one(), Expr::one()], vec![Expr::zero(), Expr::one()]]).unwrap();
        assert!(min_hermitian_eigenvalue(&nonherm.eval(c(0.0, 0.0)).unwrap(), 1e-12).is_none());
    }
}
