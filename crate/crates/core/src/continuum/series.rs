//! Truncated Taylor series `f(x + t) = Σ a_r t^r`, `a_r = f^(r)(x) / r!`,
//! used to differentiate envelope constructions in `x` without finite
//! differences.

#[derive(Debug, Clone, PartialEq)]
pub struct Series(pub Vec<f64>);

impl Series {
    pub fn zero(len: usize) -> Self {
        Series(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_assign(&mut self, o: &Series) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a += b;
        }
    }

    pub fn scaled(&self, s: f64) -> Series {
        Series(self.0.iter().map(|v| v * s).collect())
    }

    /// Product truncated to the shorter length.
    pub fn mul(&self, o: &Series) -> Series {
        let len = self.len().min(o.len());
        let mut out = vec![0.0; len];
        for (i, a) in self.0.iter().take(len).enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in o.0.iter().take(len - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Series(out)
    }

    /// Series of the `j`-th derivative; loses `j` terms.
    pub fn derivative(&self, j: usize) -> Series {
        let len = self.len().saturating_sub(j);
        Series(
            (0..len)
                .map(|r| {
                    let f: f64 = (r + 1..=r + j).map(|v| v as f64).product();
                    self.0[r + j] * f
                })
                .collect(),
        )
    }

    /// `self^alpha` for a series with positive constant term.
    pub fn powf(&self, alpha: f64) -> Series {
        let h0 = self.0[0];
        let mut g = vec![0.0; self.len()];
        g[0] = h0.powf(alpha);
        for n in 1..self.len() {
            let mut acc = 0.0;
            for k in 1..=n {
                acc += ((alpha + 1.0) * k as f64 - n as f64) * self.0[k] * g[n - k];
            }
            g[n] = acc / (n as f64 * h0);
        }
        Series(g)
    }

    /// `f^(j)(x)`.
    pub fn deriv_at_zero(&self, j: usize) -> f64 {
        self.0[j] * (1..=j).map(|v| v as f64).product::<f64>()
    }
}

/// Determinant of the square block `rows[..k]` restricted to `cols`
/// (`k = cols.len()`), for every column subset, by Laplace expansion along
/// the last row with memoisation on the column mask.
fn minors_table(rows: &[Vec<Series>], len: usize) -> Vec<Option<Series>> {
    let width = rows[0].len();
    let mut table: Vec<Option<Series>> = vec![None; 1 << width];
    let mut one = Series::zero(len);
    one.0[0] = 1.0;
    table[0] = Some(one);
    for mask in 1usize..(1 << width) {
        let k = mask.count_ones() as usize;
        if k > rows.len() {
            continue;
        }
        let row = &rows[k - 1];
        let mut acc = Series::zero(len);
        for (pos, c) in (0..width).filter(|c| mask & (1 << c) != 0).enumerate() {
            let sub = table[mask & !(1 << c)].as_ref().expect("smaller minors computed first");
            let term = row[c].mul(sub);
            let sign = if (k - 1 + pos).is_multiple_of(2) { 1.0 } else { -1.0 };
            acc.add_assign(&term.scaled(sign));
        }
        table[mask] = Some(acc);
    }
    table
}

/// Determinant of a square matrix of series.
pub fn det(rows: &[Vec<Series>]) -> Series {
    let len = rows.iter().flatten().map(Series::len).min().unwrap_or(1);
    let table = minors_table(rows, len);
    table[(1 << rows.len()) - 1].clone().expect("full minor")
}

/// Generalized cross product of `N - 1` series vectors in `N` dimensions:
/// `h . v = det[rows; v]`.
pub fn cross(rows: &[Vec<Series>]) -> Vec<Series> {
    let width = rows.len() + 1;
    let len = rows.iter().flatten().map(Series::len).min().unwrap_or(1);
    let table = minors_table(rows, len);
    let full = (1 << width) - 1;
    (0..width)
        .map(|i| {
            let m = table[full & !(1 << i)].clone().expect("maximal minor");
            if (width - 1 + i).is_multiple_of(2) {
                m
            } else {
                m.scaled(-1.0)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(v: f64, len: usize) -> Series {
        let mut s = Series::zero(len);
        s.0[0] = v;
        s
    }

    #[test]
    fn power_and_derivative() {
        // (1 + t)^(1/2) = 1 + t/2 - t^2/8 + t^3/16
        let s = Series(vec![1.0, 1.0, 0.0, 0.0]).powf(0.5);
        let expect = [1.0, 0.5, -0.125, 0.0625];
        for (a, b) in s.0.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        let e = Series(vec![1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0]);
        let d = e.derivative(2);
        assert!((d.0[0] - 1.0).abs() < 1e-15 && (d.0[2] - 0.5).abs() < 1e-15);
        assert!((e.deriv_at_zero(3) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_det_and_cross() {
        let rows: Vec<Vec<Series>> =
            [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]].iter().map(|r| r.iter().map(|&v| constant(v, 2)).collect()).collect();
        assert!((det(&rows).0[0] - 18.0).abs() < 1e-12);
        let h = cross(&rows[..2]);
        let expect = [1.0, -2.0, 5.0];
        for (a, b) in h.iter().zip(expect) {
            assert!((a.0[0] - b).abs() < 1e-12);
        }
    }
}
