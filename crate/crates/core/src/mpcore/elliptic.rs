use rug::float::Constant;
use rug::Float;

/// Arithmetic-geometric mean of two positive reals.
pub fn agm(a: &Float, b: &Float) -> Float {
    let p = a.prec().max(b.prec());
    Float::with_val(p, a.agm_ref(b))
}

/// Complete elliptic integral K(k) given the complementary modulus
/// squared `kc2 = 1 - k²`, so that K stays accurate as k → 1.
pub fn elliptic_k_from_complement(kc2: &Float) -> Float {
    let p = kc2.prec();
    let kc = Float::with_val(p, kc2.sqrt_ref());
    let m = agm(&Float::with_val(p, 1), &kc);
    Float::with_val(p, Constant::Pi) / 2u32 / m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_at_zero_and_lemniscate() {
        let p = 200;
        let k0 = elliptic_k_from_complement(&Float::with_val(p, 1));
        let half_pi = Float::with_val(p, Constant::Pi) / 2u32;
        assert!(Float::with_val(p, &k0 - &half_pi).abs() < 1e-55);
        // K(1/sqrt 2) = Γ(1/4)² / (4 sqrt π)
        let k = elliptic_k_from_complement(&Float::with_val(p, 0.5));
        let g = Float::with_val(p, Float::with_val(p, 0.25).gamma_ref());
        let want = Float::with_val(p, g.square_ref()) / 4u32 / Float::with_val(p, Constant::Pi).sqrt();
        assert!(Float::with_val(p, &k - &want).abs() < 1e-55);
    }
}
