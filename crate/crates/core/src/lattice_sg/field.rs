use std::fmt::Write as _;

use super::SgParams;

/// Real field `u_{n,m}` on `[n_min, n_min + width) × [0, m_max]`, stored row
/// by row.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    n_min: i64,
    width: usize,
    m_max: usize,
    values: Vec<f64>,
}

impl Field2D {
    pub fn zeros(n_min: i64, width: usize, m_max: usize) -> Self {
        Field2D { n_min, width, m_max, values: vec![0.0; width * (m_max + 1)] }
    }

    pub fn from_fn(n_min: i64, n_max: i64, m_max: usize, mut f: impl FnMut(i64, i64) -> f64) -> Self {
        let width = (n_max - n_min + 1).max(0) as usize;
        let mut values = Vec::with_capacity(width * (m_max + 1));
        for m in 0..=m_max as i64 {
            values.extend((n_min..=n_max).map(|n| f(n, m)));
        }
        Field2D { n_min, width, m_max, values }
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.width as i64 - 1
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn row(&self, m: usize) -> &[f64] {
        &self.values[m * self.width..(m + 1) * self.width]
    }

    pub fn get(&self, n: i64, m: i64) -> Option<f64> {
        let j = n - self.n_min;
        if j < 0 || j as usize >= self.width || m < 0 || m as usize > self.m_max {
            return None;
        }
        Some(self.values[m as usize * self.width + j as usize])
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Field2D { values: self.values.iter().map(|v| f(*v)).collect(), ..self.clone() }
    }

    /// CSV with header `n,m,u`, rows ordered by `m` then `n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(48 * self.values.len() + 8);
        out.push_str("n,m,u\n");
        for m in 0..=self.m_max {
            for (j, v) in self.row(m).iter().enumerate() {
                let _ = writeln!(out, "{},{},{:.16e}", self.n_min + j as i64, m, v);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    /// `u ↦ u − p/q`
    ToPerturbation,
    /// `u ↦ u + p/q`
    FromPerturbation,
}

pub fn background_shift(u: &Field2D, params: &SgParams, direction: ShiftDirection) -> Field2D {
    let a = params.background();
    match direction {
        ShiftDirection::ToPerturbation => u.map(|v| v - a),
        ShiftDirection::FromPerturbation => u.map(|v| v + a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_examples() {
        let sg = SgParams::new(1.3, 0.6).unwrap();
        let a = sg.background();
        let bg = Field2D::from_fn(-3, 3, 2, |_, _| a);
        let v = background_shift(&bg, &sg, ShiftDirection::ToPerturbation);
        assert!(v.values().iter().all(|x| *x == 0.0));
        let back = background_shift(&Field2D::zeros(0, 4, 1), &sg, ShiftDirection::FromPerturbation);
        assert!(back.values().iter().all(|x| *x == a));
        let f = Field2D::from_fn(0, 9, 3, |n, m| (n as f64 * 0.37 + m as f64).sin());
        let rt = background_shift(
            &background_shift(&f, &sg, ShiftDirection::ToPerturbation),
            &sg,
            ShiftDirection::FromPerturbation,
        );
        assert!(f.values().iter().zip(rt.values()).all(|(x, y)| (x - y).abs() <= 4.0 * f64::EPSILON));
    }

    #[test]
    fn csv_layout() {
        let f = Field2D::from_fn(-1, 0, 1, |n, m| (n + 10 * m) as f64);
        let csv = f.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,m,u");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[3], "-1,1,9.0000000000000000e0");
        assert_eq!(f.get(0, 1), Some(10.0));
        assert_eq!(f.get(1, 0), None);
    }
}
