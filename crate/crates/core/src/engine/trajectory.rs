use std::io::{self, Write};

/// Floats are written with 17 significant digits, enough to round-trip any
/// `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One annealer iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord<'a> {
    pub k: u64,
    pub t: u64,
    pub f_y: f64,
    pub lambda: &'a [f64],
    pub accepted: bool,
}

/// Column-oriented record of an annealer run, one row per iteration
/// starting at `k = 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    dim: usize,
    k: Vec<u64>,
    t: Vec<u64>,
    f: Vec<f64>,
    lambda: Vec<f64>,
    accepted: Vec<bool>,
    /// Embedded steps simulated over the run. Equal to the final `T_k` for
    /// global search and twice it for local search.
    pub simulated_steps: u64,
}

impl Trajectory {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            ..Default::default()
        }
    }

    pub fn push(&mut self, k: u64, t: u64, f_y: f64, lambda: &[f64], accepted: bool) {
        debug_assert_eq!(lambda.len(), self.dim);
        self.k.push(k);
        self.t.push(t);
        self.f.push(f_y);
        self.lambda.extend_from_slice(lambda);
        self.accepted.push(accepted);
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k(&self) -> &[u64] {
        &self.k
    }

    pub fn t(&self) -> &[u64] {
        &self.t
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn accepted(&self) -> &[bool] {
        &self.accepted
    }

    pub fn lambda(&self, row: usize) -> &[f64] {
        &self.lambda[row * self.dim..(row + 1) * self.dim]
    }

    pub fn record(&self, row: usize) -> TrajectoryRecord<'_> {
        TrajectoryRecord {
            k: self.k[row],
            t: self.t[row],
            f_y: self.f[row],
            lambda: self.lambda(row),
            accepted: self.accepted[row],
        }
    }

    pub fn records(&self) -> impl Iterator<Item = TrajectoryRecord<'_>> {
        (0..self.len()).map(|i| self.record(i))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = TrajectoryWriter::new(out, self.dim)?;
        for r in self.records() {
            w.write(&r)?;
        }
        Ok(())
    }
}

/// Writes trajectory rows as they are produced.
pub struct TrajectoryWriter<W: Write> {
    out: W,
}

impl<W: Write> TrajectoryWriter<W> {
    pub fn new(mut out: W, dim: usize) -> io::Result<Self> {
        write!(out, "k,T_k,f_Y")?;
        for i in 1..=dim {
            write!(out, ",lambda_{i}")?;
        }
        writeln!(out, ",accepted")?;
        Ok(Self { out })
    }

    pub fn write(&mut self, r: &TrajectoryRecord<'_>) -> io::Result<()> {
        write!(self.out, "{},{},{}", r.k, r.t, format_float(r.f_y))?;
        for &l in r.lambda {
            write!(self.out, ",{}", format_float(l))?;
        }
        writeln!(self.out, ",{}", u8::from(r.accepted))
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

/// `(k, f(Y_k)/T_k)` for every row with `T_k > 0`.
pub fn drift_ratio(trajectory: &Trajectory) -> Vec<(u64, f64)> {
    trajectory
        .records()
        .filter(|r| r.t > 0)
        .map(|r| (r.k, r.f_y / r.t as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_skips_origin() {
        let mut tr = Trajectory::new(1);
        tr.push(0, 0, 0.0, &[0.1], false);
        tr.push(1, 2, 2.0, &[0.1], true);
        tr.push(2, 5, 5.0, &[0.2], true);
        assert_eq!(drift_ratio(&tr), vec![(1, 1.0), (2, 1.0)]);
    }

    #[test]
    fn zero_f_zero_ratio() {
        let mut tr = Trajectory::new(1);
        for k in 0..5 {
            tr.push(k, k, 0.0, &[0.0], false);
        }
        assert!(drift_ratio(&tr).iter().all(|&(_, r)| r == 0.0));
    }

    #[test]
    fn csv_layout() {
        let mut tr = Trajectory::new(2);
        tr.push(0, 0, 0.0, &[0.5, 0.25], false);
        tr.push(1, 3, 4.0, &[0.1, 1.0], true);
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,T_k,f_Y,lambda_1,lambda_2,accepted");
        assert_eq!(lines[2], "1,3,4.0000000000000000e0,1.0000000000000001e-1,1.0000000000000000e0,1");
        let back: f64 = lines[2].split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }
}
