use super::{gf2k, is_irreducible_gf2, poly, Field, FieldError, Gf2k};

/// All distinct roots in GF(2^k) of a polynomial whose coefficients (low to
/// high) already live at level `k`, in ascending order.
///
/// Extracts the split part `gcd(f, z^(2^k) - z)` and separates its roots with
/// trace maps `z -> Tr(delta z)` for `delta` running over the polynomial basis;
/// one of those basis elements separates any two distinct roots.
pub fn roots_in_level(coeffs: &[Gf2k]) -> Vec<Gf2k> {
    let mut f = coeffs.to_vec();
    poly::trim(&mut f);
    let Some(deg) = poly::degree(&f) else {
        // the zero polynomial vanishes everywhere; callers never ask for that
        return vec![];
    };
    if deg == 0 {
        return vec![];
    }
    let k = f[0].degree();
    let zero = Gf2k::zero(k);
    let f = poly::monic(&f);
    let z = vec![zero, Gf2k::one(k)];
    let mut h = poly::rem(&z, &f);
    for _ in 0..k {
        h = poly::mulmod(&h, &h, &f, &zero);
    }
    let split = poly::gcd(&f, &poly::add(&h, &z, &zero));
    let mut roots = vec![];
    split_linear(&split, k, &mut roots);
    roots.sort();
    roots.dedup();
    roots
}

fn split_linear(g: &[Gf2k], k: u32, out: &mut Vec<Gf2k>) {
    match poly::degree(g) {
        None | Some(0) => return,
        Some(1) => {
            // monic z + c has root c in characteristic 2
            out.push(g[0]);
            return;
        }
        _ => {}
    }
    let zero = Gf2k::zero(k);
    for i in 0..k {
        let delta = Gf2k::basis(k, i);
        let mut w = poly::rem(&[zero, delta], g);
        let mut acc = w.clone();
        for _ in 1..k {
            w = poly::mulmod(&w, &w, g, &zero);
            acc = poly::add(&acc, &w, &zero);
        }
        let d = poly::gcd(g, &acc);
        let dd = poly::degree(&d).unwrap_or(0);
        if dd > 0 && dd < poly::degree(g).unwrap() {
            let (rest, _) = poly::divrem(g, &d);
            split_linear(&d, k, out);
            split_linear(&poly::monic(&rest), k, out);
            return;
        }
    }
    unreachable!("trace maps over a basis separate distinct roots");
}

/// A divisibility chain of binary fields GF(2^k1) ⊂ GF(2^k2) ⊂ ... with
/// explicit embeddings, the finite stand-in for the algebraic closure of GF(2).
///
/// Each consecutive embedding sends the generator `x` of the lower level to the
/// least root (in bit order) of the lower modulus inside the upper level.
/// Embeddings between non-adjacent levels are the composites, so the tower is
/// coherent by construction; tests check this against direct evaluation.
#[derive(Debug, Clone)]
pub struct FieldTower {
    levels: Vec<u32>,
    generator_images: Vec<Gf2k>,
}

impl Default for FieldTower {
    fn default() -> Self {
        FieldTower::new(&[1, 2, 4, 8, 16]).expect("default tower is valid")
    }
}

impl FieldTower {
    pub fn new(levels: &[u32]) -> Result<Self, FieldError> {
        if levels.is_empty() {
            return Err(FieldError::InvalidTower("no levels".into()));
        }
        for &k in levels {
            let m = gf2k::modulus(k)?;
            if !is_irreducible_gf2(m) {
                return Err(FieldError::InvalidTower(format!("modulus of level {k} is reducible")));
            }
        }
        let mut generator_images = vec![];
        for w in levels.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo || hi % lo != 0 {
                return Err(FieldError::NonDividingDegree { source_degree: lo, target: hi });
            }
            let m = gf2k::modulus(lo)?;
            let coeffs: Vec<Gf2k> = (0..=lo).map(|i| Gf2k::from_raw(hi, (m >> i) & 1)).collect();
            let root = *roots_in_level(&coeffs).first().ok_or_else(|| {
                FieldError::InvalidTower(format!("modulus of level {lo} has no root at level {hi}"))
            })?;
            generator_images.push(root);
        }
        Ok(FieldTower { levels: levels.to_vec(), generator_images })
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn contains(&self, k: u32) -> bool {
        self.levels.contains(&k)
    }

    fn index(&self, k: u32) -> Result<usize, FieldError> {
        self.levels.iter().position(|&l| l == k).ok_or(FieldError::NotInTower(k))
    }

    /// The level `2k` when it is part of the tower.
    pub fn quadratic_extension(&self, k: u32) -> Option<u32> {
        self.contains(2 * k).then_some(2 * k)
    }

    /// The next level above `k`, if any.
    pub fn next_level(&self, k: u32) -> Option<u32> {
        self.levels.iter().copied().find(|&l| l > k)
    }

    /// Image of the generator of level `source` inside level `target`.
    pub fn generator_image(&self, source: u32, target: u32) -> Result<Gf2k, FieldError> {
        self.embed(Gf2k::generator(source), target)
    }

    /// The tower embedding GF(2^source) -> GF(2^target).
    pub fn embed(&self, a: Gf2k, target: u32) -> Result<Gf2k, FieldError> {
        let i = self.index(a.degree())?;
        let j = self.index(target)?;
        if j < i {
            return Err(FieldError::NonDividingDegree { source_degree: a.degree(), target });
        }
        let mut cur = a;
        for step in i..j {
            cur = eval_bits(cur.bits(), self.generator_images[step]);
        }
        Ok(cur)
    }

    /// A root of `coeffs` (all at one level `j`) in GF(2^k), or `None`.
    ///
    /// Coefficients in GF(2) lift to any level; otherwise both `j` and `k`
    /// must be tower levels. The least root in bit order is returned.
    pub fn find_root_in_extension(&self, coeffs: &[Gf2k], k: u32) -> Result<Option<Gf2k>, FieldError> {
        Ok(self.roots_in_extension(coeffs, k)?.into_iter().next())
    }

    pub fn roots_in_extension(&self, coeffs: &[Gf2k], k: u32) -> Result<Vec<Gf2k>, FieldError> {
        let Some(first) = coeffs.first() else { return Ok(vec![]) };
        let j = first.degree();
        if coeffs.iter().any(|c| c.degree() != j) {
            let other = coeffs.iter().find(|c| c.degree() != j).unwrap();
            return Err(FieldError::LevelMismatch { left: first.tag(), right: other.tag() });
        }
        if k == 0 || k % j != 0 {
            return Err(FieldError::NonDividingDegree { source_degree: j, target: k });
        }
        let lifted: Vec<Gf2k> = if coeffs.iter().all(|c| c.is_prime_field()) {
            coeffs.iter().map(|c| Gf2k::new(k, c.bits())).collect::<Result<_, _>>()?
        } else {
            coeffs.iter().map(|&c| self.embed(c, k)).collect::<Result<_, _>>()?
        };
        Ok(roots_in_level(&lifted))
    }
}

/// Evaluates the GF(2)-polynomial with coefficient mask `bits` at `x`.
fn eval_bits(bits: u64, x: Gf2k) -> Gf2k {
    let k = x.degree();
    let mut acc = Gf2k::zero(k);
    for i in (0..64).rev() {
        acc = acc * x;
        if (bits >> i) & 1 == 1 {
            acc = acc + Gf2k::one(k);
        }
    }
    acc
}
