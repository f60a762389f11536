//! Linear algebra over the field of rational functions of a chart.

use std::fmt;

use crate::poly::{content, Chart, Poly, RatFunc};

/// Dense matrix of rational functions, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    chart: Chart,
    rows: Vec<Vec<RatFunc>>,
    ncols: usize,
}

impl RatMatrix {
    /// Panics if rows are ragged.
    pub fn new(chart: &Chart, rows: Vec<Vec<RatFunc>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Self {
            chart: chart.clone(),
            rows,
            ncols,
        }
    }

    pub fn zeros(chart: &Chart, nrows: usize, ncols: usize) -> Self {
        Self::new(chart, vec![vec![RatFunc::zero(chart); ncols]; nrows], ncols)
    }

    pub fn identity(chart: &Chart, n: usize) -> Self {
        let mut m = Self::zeros(chart, n, n);
        for i in 0..n {
            m.rows[i][i] = RatFunc::one(chart);
        }
        m
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<RatFunc>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(RatFunc::is_zero)
    }

    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        Self::new(
            &self.chart,
            self.rows
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
            self.ncols,
        )
    }

    pub fn try_map<E>(
        &self,
        chart: &Chart,
        f: impl Fn(&RatFunc) -> Result<RatFunc, E>,
    ) -> Result<Self, E> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(&f).collect::<Result<Vec<_>, E>>())
            .collect::<Result<Vec<_>, E>>()?;
        Ok(Self::new(chart, rows, self.ncols))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn add(&self, other: &RatMatrix) -> Self {
        assert_eq!((self.nrows(), self.ncols), (other.nrows(), other.ncols));
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Self::new(&self.chart, rows, self.ncols)
    }

    pub fn mul(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.ncols, other.nrows(), "inner dimensions");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols)
                    .map(|j| {
                        r.iter().zip(&other.rows).fold(
                            RatFunc::zero(&self.chart),
                            |acc, (a, orow)| {
                                if a.is_zero() || orow[j].is_zero() {
                                    acc
                                } else {
                                    &acc + &(a * &orow[j])
                                }
                            },
                        )
                    })
                    .collect()
            })
            .collect();
        Self::new(&self.chart, rows, other.ncols)
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        assert_eq!(self.ncols, v.len());
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(RatFunc::zero(&self.chart), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Rank over the rational-function field.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Poly>> = self.rows.iter().map(|r| clear_denominators(r)).collect();
        poly_rank(rows)
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].recip().expect("pivot is non-zero");
            rows[r] = rows[r].iter().map(|a| a * &inv).collect();
            for i in 0..rows.len() {
                if i == r || rows[i][c].is_zero() {
                    continue;
                }
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (a, b) in rows[i].iter_mut().zip(&pivot_row) {
                    if !b.is_zero() {
                        *a = &*a - &(&f * b);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        (Self::new(&self.chart, rows, self.ncols), pivots)
    }

    /// Basis of the right kernel, each vector cleared to polynomials with content 1.
    pub fn kernel(&self) -> Vec<Vec<Poly>> {
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![RatFunc::zero(&self.chart); self.ncols];
                v[f] = RatFunc::one(&self.chart);
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -rref.get(row, f);
                }
                primitive_vector(&v)
            })
            .collect()
    }

    /// All `p × p` minors over the chosen column subsets, in lexicographic
    /// order of the column sets. Requires a matrix with polynomial entries
    /// and `p` equal to the row count.
    pub fn maximal_minors(&self) -> Vec<Poly> {
        let p = self.nrows();
        let polys: Vec<Vec<Poly>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|a| a.as_poly().expect("polynomial entries").clone())
                    .collect()
            })
            .collect();
        combinations(self.ncols, p)
            .into_iter()
            .map(|cols| {
                let sub: Vec<Vec<Poly>> = polys
                    .iter()
                    .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                    .collect();
                determinant(&sub, &self.chart)
            })
            .collect()
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(
                self.rows
                    .iter()
                    .map(|r| r.iter().map(|a| a.to_string()).collect::<Vec<_>>()),
            )
            .finish()
    }
}

/// Least common multiple of the denominators, monic.
pub fn common_denominator(v: &[RatFunc]) -> Poly {
    let chart = v.first().expect("non-empty vector").chart();
    let mut l = Poly::one(chart);
    for a in v {
        if a.denom().is_one() {
            continue;
        }
        let g = l.gcd(a.denom()).expect("non-zero denominators");
        l = &l * &a.denom().exact_div(&g).expect("gcd divides");
    }
    l.monic()
}

/// Multiplies a vector of rational functions by the lcm of its denominators.
pub fn clear_denominators(v: &[RatFunc]) -> Vec<Poly> {
    if v.is_empty() {
        return Vec::new();
    }
    let l = common_denominator(v);
    v.iter()
        .map(|a| {
            let q = l.exact_div(a.denom()).expect("lcm is a multiple");
            a.numer() * &q
        })
        .collect()
}

/// Clears denominators and divides out the polynomial content.
pub fn primitive_vector(v: &[RatFunc]) -> Vec<Poly> {
    let polys = clear_denominators(v);
    match content(&polys) {
        Ok(c) => polys
            .iter()
            .map(|p| p.exact_div(&c).expect("content divides"))
            .collect(),
        Err(_) => polys,
    }
}

fn poly_rank(mut rows: Vec<Vec<Poly>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let piv = pivot_row[c].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (a, b) in row.iter_mut().zip(&pivot_row) {
                *a = &(&piv * a) - &(&f * b);
            }
            if let Ok(g) = content(row) {
                if !g.is_one() {
                    for a in row.iter_mut() {
                        *a = a.exact_div(&g).expect("content divides");
                    }
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Fraction-free (Bareiss) determinant of a square polynomial matrix.
pub fn determinant(m: &[Vec<Poly>], chart: &Chart) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(chart);
    }
    let mut a = m.to_vec();
    let mut negate = false;
    let mut prev = Poly::one(chart);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Poly::zero(chart);
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Resultant of `a` and `b` with respect to variable `i`, via the Sylvester matrix.
pub fn resultant(a: &Poly, b: &Poly, i: usize) -> Poly {
    let chart = a.chart();
    let (da, db) = (a.degree_in(i) as usize, b.degree_in(i) as usize);
    if da + db == 0 {
        return Poly::one(chart);
    }
    let size = da + db;
    let mut rows = vec![vec![Poly::zero(chart); size]; size];
    for r in 0..db {
        for k in 0..=da {
            rows[r][r + k] = a.coeff_in(i, (da - k) as u32);
        }
    }
    for r in 0..da {
        for k in 0..=db {
            rows[db + r][r + k] = b.coeff_in(i, (db - k) as u32);
        }
    }
    determinant(&rows, chart)
}

/// k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}
