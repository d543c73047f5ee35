//! Reference computations written directly from the closed forms, sharing no
//! code with the library beyond its matrix type.

#![allow(dead_code)]

use capdetect::channels::Channel;
use capdetect::detection::BasisFamily;
use capdetect::{Complex, ComplexMatrix};

pub fn h2(x: f64) -> f64 {
    let t = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    t(x) + t(1.0 - x)
}

pub fn shannon(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Maximum of a smooth function on `[0, 1]`: a 20001-point scan followed by
/// ternary search in the neighbouring cells.
pub fn max_on_unit_interval(f: impl Fn(f64) -> f64) -> f64 {
    const N: usize = 20_000;
    let (mut k_best, mut f_best) = (0, f(0.0));
    for k in 1..=N {
        let v = f(k as f64 / N as f64);
        if v > f_best {
            k_best = k;
            f_best = v;
        }
    }
    let mut lo = k_best.saturating_sub(1) as f64 / N as f64;
    let mut hi = ((k_best + 1).min(N)) as f64 / N as f64;
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    f_best.max(f(0.5 * (lo + hi)))
}

pub fn amplitude_damping_capacity(gamma: f64) -> f64 {
    if gamma >= 0.5 {
        return 0.0;
    }
    max_on_unit_interval(|q| h2((1.0 - gamma) * q) - h2(gamma * q)).max(0.0)
}

pub fn two_kraus_capacity(alpha: f64, beta: f64) -> f64 {
    let (ca, sa, sb) = (alpha.cos().powi(2), alpha.sin().powi(2), beta.sin().powi(2));
    max_on_unit_interval(|p| h2(p * ca + (1.0 - p) * sb) - h2(p * sa + (1.0 - p) * sb)).max(0.0)
}

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// `Φ+, Φ-, Ψ+, Ψ-` written out in the `|00>, |01>, |10>, |11>` basis.
pub fn bell() -> [[Complex; 4]; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    [
        [c(s, 0.0), z, z, c(s, 0.0)],
        [c(s, 0.0), z, z, c(-s, 0.0)],
        [z, c(s, 0.0), c(s, 0.0), z],
        [z, c(s, 0.0), c(-s, 0.0), z],
    ]
}

fn combo(x: Complex, u: &[Complex; 4], y: Complex, v: &[Complex; 4]) -> Vec<Complex> {
    (0..4).map(|k| x * u[k] + y * v[k]).collect()
}

/// The four vectors of a qubit family, straight from their defining
/// superpositions.
pub fn family_vectors(family: BasisFamily, t1: f64, t2: f64) -> Vec<Vec<Complex>> {
    let [pp, pm, sp, sm] = bell();
    let (a, b, cc, d) = (t1.cos(), t1.sin(), t2.cos(), t2.sin());
    let r = |x: f64| c(x, 0.0);
    let i = |x: f64| c(0.0, x);
    match family {
        BasisFamily::B1 => vec![
            combo(r(a), &pp, r(b), &pm),
            combo(r(-b), &pp, r(a), &pm),
            combo(r(cc), &sp, r(d), &sm),
            combo(r(-d), &sp, r(cc), &sm),
        ],
        BasisFamily::B2 => vec![
            combo(r(a), &pp, r(b), &sp),
            combo(r(-b), &pp, r(a), &sp),
            combo(r(cc), &pm, r(d), &sm),
            combo(r(-d), &pm, r(cc), &sm),
        ],
        BasisFamily::B3 => vec![
            combo(r(a), &pp, i(b), &sm),
            combo(i(b), &pp, r(a), &sm),
            combo(r(cc), &pm, i(d), &sp),
            combo(i(d), &pm, r(cc), &sp),
        ],
        f => panic!("{f} is not a qubit family"),
    }
}

/// `|v><v|` entry by entry.
pub fn projector(v: &[Complex]) -> ComplexMatrix {
    ComplexMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
}

/// Choi state `(1/d) Σ_j |A_j>><<A_j|` with `|A>> = Σ_ij A_ij |j>|i>`,
/// reference index first.
pub fn choi_state(ch: &Channel) -> ComplexMatrix {
    let (din, dout) = (ch.d_in(), ch.d_out());
    let n = din * dout;
    let mut m = ComplexMatrix::zeros(n, n);
    for a in ch.kraus() {
        let v: Vec<Complex> = (0..n).map(|k| a[(k % dout, k / dout)]).collect();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += v[i] * v[j].conj() / din as f64;
            }
        }
    }
    m
}

/// `<v|M|v>`
pub fn born(m: &ComplexMatrix, v: &[Complex]) -> f64 {
    let n = v.len();
    let mut acc = c(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += v[i].conj() * m[(i, j)] * v[j];
        }
    }
    acc.re
}

/// Eigenvalues of a Hermitian matrix via the Faddeev–LeVerrier
/// characteristic polynomial and Durand–Kerner root finding. Only meant for
/// the small (n <= 4) matrices used here.
pub fn eigenvalues_charpoly(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    // coefficients c_k of λ^n + c_1 λ^(n-1) + ... + c_n
    let mut coeffs = vec![c(1.0, 0.0)];
    let mut mk = ComplexMatrix::zeros(n, n);
    let id = ComplexMatrix::identity(n);
    for k in 1..=n {
        let shifted = &mk + &id.scale(*coeffs.last().unwrap());
        mk = m.matmul(&shifted).unwrap();
        let ck = -mk.trace().unwrap() / k as f64;
        coeffs.push(ck);
    }
    let poly = |z: Complex| coeffs.iter().fold(c(0.0, 0.0), |acc, &a| acc * z + a);
    let mut roots: Vec<Complex> = (0..n).map(|k| c(0.4, 0.9).powu(k as u32)).collect();
    for _ in 0..2000 {
        for i in 0..n {
            let mut denom = c(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = poly(roots[i]) / denom;
            roots[i] -= step;
        }
    }
    let mut out: Vec<f64> = roots.iter().map(|z| z.re).collect();
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    out
}

/// Entropy exchange from the complementary side: the environment state
/// `W_jk = Tr(A_j ρ A_k†)` has the same nonzero spectrum as the joint output.
pub fn entropy_exchange_via_environment(ch: &Channel, rho: &ComplexMatrix) -> f64 {
    let ks = ch.kraus();
    let w = ComplexMatrix::from_fn(ks.len(), ks.len(), |j, k| {
        ks[j].matmul(rho).unwrap().matmul(&ks[k].dagger()).unwrap().trace().unwrap()
    });
    let spec = w.hermitian_eig().unwrap().eigenvalues;
    shannon(&spec.iter().map(|&x| x.max(0.0)).collect::<Vec<_>>())
}

pub fn hashing_depolarizing(p: f64) -> f64 {
    1.0 - h2(p) - p * 3f64.log2()
}

/// Root of a function that changes sign on `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) < 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) * flo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
