//! Quadrature: adaptive Gauss–Kronrod (7/15) and composite Gauss–Legendre.

use crate::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
    pub converged: bool,
}

fn gk15<T: Real>(f: &mut impl FnMut(T) -> T, a: T, b: T) -> (T, T) {
    let center = (a + b) * T::half();
    let half = (b - a) * T::half();
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let s = f(center - dx) + f(center + dx);
        kronrod = kronrod + s * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + s * T::lit(WG[j / 2]);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Subdivides the panel with the largest error estimate until the summed estimate
/// is below `max(abs_tol, rel_tol·|I|)` or `max_panels` is reached.
pub fn adaptive<T: Real>(
    mut f: impl FnMut(T) -> T,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_panels: usize,
) -> Integral<T> {
    if a == b {
        return Integral { value: T::zero(), error: T::zero(), converged: true };
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let (value, error) = panels
            .iter()
            .fold((T::zero(), T::zero()), |(v, e), p| (v + p.2, e + p.3));
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target {
            return Integral { value, error, converged: true };
        }
        if panels.len() >= max_panels {
            return Integral { value, error, converged: false };
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (pa, pb, _, _) = panels.swap_remove(worst);
        let mid = (pa + pb) * T::half();
        if mid <= pa || mid >= pb {
            let (value, error) = panels
                .iter()
                .fold((T::zero(), T::zero()), |(v, e), p| (v + p.2, e + p.3));
            return Integral { value, error, converged: false };
        }
        let (v1, e1) = gk15(&mut f, pa, mid);
        let (v2, e2) = gk15(&mut f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, computed by Newton iteration on P_n.
pub fn gauss_legendre<T: Real>(n: usize) -> Vec<(T, T)> {
    assert!(n >= 1, "at least one node");
    let nf = T::from_usize_lossy(n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let guess = (T::PI() * (T::from_usize_lossy(i) + T::lit(0.75)) / (nf + T::half())).cos();
        let mut x = guess;
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                let (_, d) = legendre(n, x);
                dp = d;
                break;
            }
        }
        let w = T::two() / ((T::one() - x * x) * dp * dp);
        out.push((x, w));
    }
    out.reverse();
    out
}

fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for j in 2..=n {
        let jf = T::from_usize_lossy(j);
        let p2 = ((T::two() * jf - T::one()) * x * p1 - (jf - T::one()) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize_lossy(n);
    let dp = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// Composite Gauss–Legendre rule with `panels` equal panels of the given node set.
pub fn composite<T: Real>(mut f: impl FnMut(T) -> T, a: T, b: T, rule: &[(T, T)], panels: usize) -> T {
    let h = (b - a) / T::from_usize_lossy(panels);
    let mut sum = T::zero();
    for p in 0..panels {
        let lo = a + h * T::from_usize_lossy(p);
        let c = lo + h * T::half();
        let mut panel = T::zero();
        for &(x, w) in rule {
            panel = panel + w * f(c + x * h * T::half());
        }
        sum = sum + panel * h * T::half();
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_weights_sum_to_two() {
        for n in [1, 2, 5, 16, 40] {
            let s: f64 = gauss_legendre::<f64>(n).iter().map(|p| p.1).sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
        }
    }

    #[test]
    fn legendre_exact_for_polynomials() {
        let rule = gauss_legendre::<f64>(6);
        let v = composite(|x: f64| x.powi(11) + 3.0 * x.powi(10), -1.0, 1.0, &rule, 1);
        assert!((v - 6.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn kronrod_smooth() {
        let r = adaptive(|x: f64| x.exp(), 0.0, 1.0, 1e-14, 1e-14, 100);
        assert!(r.converged);
        assert!((r.value - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn kronrod_sqrt_endpoint() {
        let r = adaptive(|x: f64| x.sqrt(), 0.0, 1.0, 1e-13, 1e-13, 500);
        assert!((r.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn legendre_in_extended_precision() {
        use crate::extended::DoubleDouble as Dd;
        let rule = gauss_legendre::<Dd>(8);
        let v = composite(|x: Dd| x * x, Dd::from(0.0), Dd::from(1.0), &rule, 1);
        let err = num_traits::Float::abs(v - Dd::from(1.0) / Dd::from(3.0));
        assert!(f64::from(err) < 1e-28, "{err:?}");
    }
}
