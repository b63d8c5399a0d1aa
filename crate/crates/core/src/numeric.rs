//! Small dense f64 matrix helpers and a self-contained reproducible RNG.
//!
//! The matrices are at most `dim × dim` for Lie algebras of dimension ≤ 8,
//! so plain `Vec<f64>` routines without pivoting refinements are adequate.

/// Row-major square matrix of side `n`.
#[derive(Debug, Clone)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat { n, a: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += aik * other.a[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&other.a) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&other.a) {
            *x -= y;
        }
        out
    }

    pub fn scale(&self, c: f64) -> Mat {
        let mut out = self.clone();
        for x in out.a.iter_mut() {
            *x *= c;
        }
        out
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        self.a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.a.clone();
        let mut det = 1.0;
        for c in 0..n {
            let mut p = c;
            for i in c + 1..n {
                if a[i * n + c].abs() > a[p * n + c].abs() {
                    p = i;
                }
            }
            if a[p * n + c] == 0.0 {
                return 0.0;
            }
            if p != c {
                for j in 0..n {
                    a.swap(c * n + j, p * n + j);
                }
                det = -det;
            }
            det *= a[c * n + c];
            let inv = 1.0 / a[c * n + c];
            for i in c + 1..n {
                let f = a[i * n + c] * inv;
                if f == 0.0 {
                    continue;
                }
                for j in c..n {
                    a[i * n + j] -= f * a[c * n + j];
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat> {
        let n = self.n;
        let mut a = self.a.clone();
        let mut b = Mat::identity(n).a;
        for c in 0..n {
            let mut p = c;
            for i in c + 1..n {
                if a[i * n + c].abs() > a[p * n + c].abs() {
                    p = i;
                }
            }
            if a[p * n + c] == 0.0 {
                return None;
            }
            if p != c {
                for j in 0..n {
                    a.swap(c * n + j, p * n + j);
                    b.swap(c * n + j, p * n + j);
                }
            }
            let inv = 1.0 / a[c * n + c];
            for j in 0..n {
                a[c * n + j] *= inv;
                b[c * n + j] *= inv;
            }
            for i in 0..n {
                if i != c && a[i * n + c] != 0.0 {
                    let f = a[i * n + c];
                    for j in 0..n {
                        a[i * n + j] -= f * a[c * n + j];
                        b[i * n + j] -= f * b[c * n + j];
                    }
                }
            }
        }
        Some(Mat { n, a: b })
    }

    /// Matrix exponential by scaling and squaring with a Taylor kernel.
    pub fn expm(&self) -> Mat {
        let norm = self.norm_inf();
        let s = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let x = self.scale(0.5f64.powi(s as i32));
        let mut term = Mat::identity(self.n);
        let mut sum = Mat::identity(self.n);
        for k in 1..=24 {
            term = term.mul(&x).scale(1.0 / k as f64);
            sum = sum.add(&term);
        }
        let mut r = sum;
        for _ in 0..s {
            r = r.mul(&r);
        }
        r
    }

    /// Principal matrix logarithm via inverse scaling-and-squaring with
    /// Denman–Beavers square roots. Valid for matrices close enough to the
    /// identity that repeated square roots converge (small group elements).
    pub fn logm(&self) -> Mat {
        let n = self.n;
        let mut x = self.clone();
        let mut k = 0u32;
        while x.sub(&Mat::identity(n)).norm_inf() > 0.25 && k < 40 {
            x = x.sqrtm();
            k += 1;
        }
        let e = x.sub(&Mat::identity(n));
        // log(I + E) Taylor series
        let mut pow = e.clone();
        let mut sum = Mat::zeros(n);
        for m in 1..=30 {
            let c = if m % 2 == 1 { 1.0 } else { -1.0 } / m as f64;
            sum = sum.add(&pow.scale(c));
            pow = pow.mul(&e);
        }
        sum.scale(2f64.powi(k as i32))
    }

    /// Principal square root by the Denman–Beavers iteration.
    pub fn sqrtm(&self) -> Mat {
        let mut y = self.clone();
        let mut z = Mat::identity(self.n);
        for _ in 0..60 {
            let yi = y.inverse().expect("singular matrix in sqrtm");
            let zi = z.inverse().expect("singular matrix in sqrtm");
            let y_next = y.add(&zi).scale(0.5);
            let z_next = z.add(&yi).scale(0.5);
            let delta = y_next.max_abs_diff(&y);
            y = y_next;
            z = z_next;
            if delta < 1e-16 {
                break;
            }
        }
        y
    }
}

/// xoshiro256** with splitmix64 seeding. Implemented here so that weight
/// estimates stay bit-reproducible independently of external crate versions.
#[derive(Debug, Clone)]
pub struct Rng {
    s: [u64; 4],
}

impl Rng {
    pub fn seeded(seed: u64) -> Self {
        let mut sm = seed;
        let mut next = || {
            sm = sm.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = sm;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        Rng {
            s: [next(), next(), next(), next()],
        }
    }

    /// Derive an independent stream for shard `idx` of a base seed.
    pub fn shard(seed: u64, idx: u64) -> Self {
        Rng::seeded(seed ^ idx.wrapping_mul(0xa0761d6478bd642f).rotate_left(17))
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform in the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        loop {
            let u = (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Uniform in (lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}
