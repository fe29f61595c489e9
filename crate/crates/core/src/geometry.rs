//! Tent profiles, mollified profiles, building blocks, and glued-chain
//! domains.
//!
//! A building block is the region below the graph of a tent of opening
//! half-angle `theta` and peak height `L`, with its two corners and peak
//! rounded by convolution against a compactly supported mollifier of radius
//! `eps`, sitting on a half-width `M` pedestal. Chains concatenate scaled
//! copies of two such blocks in alternating order between flat tails.

use crate::error::{invalid, Error, Result};
use crate::quad::{adaptive_simpson, gl_composite};
use std::sync::OnceLock;

/// Normalization constant `Z = ∫_{-1}^{1} exp(-1/(1-x²)) dx`.
fn mollifier_norm() -> f64 {
    static Z: OnceLock<f64> = OnceLock::new();
    *Z.get_or_init(|| {
        let mut f = |x: f64| {
            let s = 1.0 - x * x;
            if s <= 0.0 {
                0.0
            } else {
                (-1.0 / s).exp()
            }
        };
        // The integrand is C^∞ and vanishes to all orders at ±1; adaptive
        // Simpson reaches 1e-14 comfortably.
        adaptive_simpson(&mut f, -1.0, 1.0, 1e-16).expect("mollifier normalization")
    })
}

/// The unit mollifier `φ(x) = Z⁻¹ exp(-1/(1-x²))` on (-1, 1), zero outside.
pub fn mollifier_unit(x: f64) -> f64 {
    let s = 1.0 - x * x;
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp() / mollifier_norm()
    }
}

/// The scaled mollifier `φ_ε(x) = φ(x/ε)/ε`.
pub fn mollifier_eval(eps: f64, x: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(invalid(format!("mollifier radius eps = {eps} must be > 0")));
    }
    Ok(mollifier_unit(x / eps) / eps)
}

/// The tent profile: `L - |x|·cot(theta)` where positive, zero elsewhere.
pub fn tent_profile(theta: f64, l: f64, x: f64) -> Result<f64> {
    check_angle_height(theta, l)?;
    let cot = 1.0 / theta.tan();
    Ok((l - x.abs() * cot).max(0.0))
}

/// Derivative of the tent away from its kinks (sign convention of `x`).
fn tent_slope(theta: f64, l: f64, x: f64) -> f64 {
    let cot = 1.0 / theta.tan();
    if x.abs() >= l * theta.tan() || x == 0.0 {
        0.0
    } else {
        -x.signum() * cot
    }
}

fn check_angle_height(theta: f64, l: f64) -> Result<()> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(invalid(format!("theta = {theta} must lie in (0, pi/2)")));
    }
    if !(l > 0.0) {
        return Err(invalid(format!("height L = {l} must be > 0")));
    }
    Ok(())
}

/// The quadruple (theta, L, eps, M) defining one building block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorBlockParams {
    /// Opening half-angle in radians, in (0, pi/2).
    pub theta: f64,
    /// Tent peak height L > 0.
    pub l: f64,
    /// Mollification radius, in (0, L·tan(theta)/2).
    pub eps: f64,
    /// Pedestal half-width, at least L·tan(theta) + eps so the profile
    /// vanishes at ±M and blocks glue continuously.
    pub m: f64,
}

impl SectorBlockParams {
    pub fn new(theta: f64, l: f64, eps: f64, m: f64) -> Result<Self> {
        check_angle_height(theta, l)?;
        let half_support = l * theta.tan();
        if !(eps > 0.0) {
            return Err(invalid(format!("eps = {eps} must be > 0")));
        }
        // Half of the tent half-support keeps the corner mollification zones
        // disjoint, which the tabulated evaluation relies on.
        if !(eps < 0.5 * half_support) {
            return Err(invalid(format!(
                "eps = {eps} must be < L·tan(theta)/2 = {}",
                0.5 * half_support
            )));
        }
        if !(m >= half_support + eps) {
            return Err(invalid(format!(
                "M = {m} must be >= L·tan(theta) + eps = {}",
                half_support + eps
            )));
        }
        Ok(Self { theta, l, eps, m })
    }

    /// cot(theta), the tent slope magnitude and the profile Lipschitz bound.
    pub fn cot(&self) -> f64 {
        1.0 / self.theta.tan()
    }

    /// Half-length of the tent support, L·tan(theta).
    pub fn half_support(&self) -> f64 {
        self.l * self.theta.tan()
    }
}

/// One tabulated corner zone: values and derivatives of the mollified profile
/// on a uniform grid across an eps-neighborhood of a tent kink.
#[derive(Debug, Clone)]
struct CornerTable {
    x0: f64,
    h: Vec<f64>,
    hp: Vec<f64>,
}

/// The mollified profile `h = tent ⋆ φ_ε` with exact tent values outside the
/// kink neighborhoods and tabulated convolution values inside them.
///
/// Because the tent is affine away from its kinks and φ is even with unit
/// mass, the convolution reproduces the tent exactly whenever the whole
/// mollifier window sits on one affine branch; only the eps-neighborhoods of
/// x ∈ {-L·tan θ, 0, L·tan θ} need numerical treatment. Evaluation mirrors
/// x → |x|, so even symmetry holds to the last bit.
#[derive(Debug, Clone)]
pub struct MollifiedProfile {
    pub params: SectorBlockParams,
    /// Grid spacing of the corner tables (eps / 64).
    pub sample_spacing: f64,
    /// Zone around the peak kink at x = 0 (covers [0, eps]).
    center: CornerTable,
    /// Zone around the foot kink at x = L·tan θ (covers ±eps around it).
    foot: CornerTable,
}

impl MollifiedProfile {
    pub fn new(params: SectorBlockParams) -> Result<Self> {
        let eps = params.eps;
        let spacing = eps / 64.0;
        let kinks = [-params.half_support(), 0.0, params.half_support()];
        let tabulate = |x0: f64, n: usize| -> CornerTable {
            let mut h = Vec::with_capacity(n + 1);
            let mut hp = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let x = x0 + i as f64 * spacing;
                h.push(convolve(&params, &kinks, x, false));
                hp.push(convolve(&params, &kinks, x, true));
            }
            CornerTable { x0, h, hp }
        };
        let center = tabulate(0.0, 64);
        let foot = tabulate(params.half_support() - eps, 128);
        let profile = Self {
            params,
            sample_spacing: spacing,
            center,
            foot,
        };
        // Guard the tabulation: the derivative bound is inherited from the
        // tent through the convolution and must survive interpolation.
        let cot = params.cot();
        for (tab, lo) in [(&profile.center, 0.0), (&profile.foot, f64::NAN)] {
            let _ = lo;
            for &v in &tab.hp {
                if v.abs() > cot * (1.0 + 1e-10) {
                    return Err(Error::QuadratureFailure(format!(
                        "corner-zone derivative {v} exceeds cot(theta) = {cot}"
                    )));
                }
            }
        }
        Ok(profile)
    }

    /// Profile height h(x).
    pub fn height(&self, x: f64) -> f64 {
        let p = &self.params;
        let xa = x.abs();
        let edge = p.half_support();
        if xa >= edge + p.eps {
            0.0
        } else if xa <= p.eps {
            self.center.interp_h(xa, self.sample_spacing).max(0.0)
        } else if xa >= edge - p.eps {
            self.foot.interp_h(xa, self.sample_spacing).max(0.0)
        } else {
            p.l - xa * p.cot()
        }
    }

    /// Profile derivative h'(x); odd in x, linear interpolation inside the
    /// corner zones (which preserves the cot(theta) bound).
    pub fn slope(&self, x: f64) -> f64 {
        let p = &self.params;
        let xa = x.abs();
        let edge = p.half_support();
        let mag = if xa >= edge + p.eps {
            0.0
        } else if xa <= p.eps {
            self.center.interp_hp(xa, self.sample_spacing)
        } else if xa >= edge - p.eps {
            self.foot.interp_hp(xa, self.sample_spacing)
        } else {
            -p.cot()
        };
        if x < 0.0 {
            -mag
        } else if x == 0.0 {
            0.0
        } else {
            mag
        }
    }

    /// Half-length of the profile support, L·tan(theta) + eps.
    pub fn half_width(&self) -> f64 {
        self.params.half_support() + self.params.eps
    }

    /// Peak height h(0) (slightly below L: mollification shaves the tip).
    pub fn peak(&self) -> f64 {
        self.height(0.0)
    }
}

impl CornerTable {
    /// Cubic Hermite interpolation of h using the tabulated derivatives.
    fn interp_h(&self, x: f64, spacing: f64) -> f64 {
        let (i, t) = self.locate(x, spacing);
        let (h0, h1) = (self.h[i], self.h[i + 1]);
        let (d0, d1) = (self.hp[i] * spacing, self.hp[i + 1] * spacing);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * h0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * h1
            + (t3 - t2) * d1
    }

    /// Linear interpolation of h' (convex combination keeps |h'| ≤ cot θ).
    fn interp_hp(&self, x: f64, spacing: f64) -> f64 {
        let (i, t) = self.locate(x, spacing);
        (1.0 - t) * self.hp[i] + t * self.hp[i + 1]
    }

    fn locate(&self, x: f64, spacing: f64) -> (usize, f64) {
        let s = ((x - self.x0) / spacing).clamp(0.0, (self.h.len() - 1) as f64);
        let i = (s as usize).min(self.h.len() - 2);
        (i, s - i as f64)
    }
}

/// Convolution `(tent ⋆ φ_ε)(x)` (or of the tent derivative when `deriv`),
/// evaluated by Gauss–Legendre panels split at the tent-kink preimages so
/// every panel sees a smooth integrand.
fn convolve(p: &SectorBlockParams, kinks: &[f64; 3], x: f64, deriv: bool) -> f64 {
    let eps = p.eps;
    let mut cuts = vec![-1.0, 1.0];
    for &k in kinks {
        let u = (x - k) / eps;
        if u > -1.0 && u < 1.0 {
            cuts.push(u);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let mut f = |u: f64| {
            let weight = mollifier_unit(u);
            let y = x - eps * u;
            let tent_val = if deriv {
                tent_slope(p.theta, p.l, y)
            } else {
                (p.l - y.abs() * p.cot()).max(0.0)
            };
            weight * tent_val
        };
        // The bump's derivatives grow steeply toward its support edges; a
        // composite rule per kink-split panel keeps the tabulation near
        // machine accuracy (a single 32-node panel only reaches ~1e-9).
        total += gl_composite(&mut f, w[0], w[1], 8);
    }
    total
}

/// Shape of the top boundary over one x-interval.
#[derive(Debug, Clone)]
pub enum Shape {
    /// H = 0 (flat tail or spacer).
    Flat,
    /// H(x) = scale · h((x - center)/scale) for a mollified profile h.
    Block {
        profile: MollifiedProfile,
        center: f64,
        scale: f64,
    },
}

/// One maximal interval of the top boundary with a single shape.
#[derive(Debug, Clone)]
pub struct Segment {
    pub x_lo: f64,
    pub x_hi: f64,
    pub shape: Shape,
}

impl Segment {
    fn height(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Flat => 0.0,
            Shape::Block {
                profile,
                center,
                scale,
            } => scale * profile.height((x - center) / scale),
        }
    }

    fn slope(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Flat => 0.0,
            Shape::Block {
                profile, center, scale,
            } => profile.slope((x - center) / scale),
        }
    }
}

/// Bounded subgraph domain {x_l < x < x_r, -depth < y < H(x)} with a
/// piecewise description of H and the junction abscissas where segments meet.
#[derive(Debug, Clone)]
pub struct PlanarDomain {
    pub segments: Vec<Segment>,
    /// Segment boundaries a_0 < a_1 < … (including the outer endpoints).
    pub junctions: Vec<f64>,
    pub depth: f64,
}

impl PlanarDomain {
    fn validate(self) -> Result<Self> {
        if !(self.depth > 0.0) {
            return Err(invalid(format!("depth = {} must be > 0", self.depth)));
        }
        if self.segments.is_empty() {
            return Err(invalid("domain needs at least one segment"));
        }
        for w in self.junctions.windows(2) {
            if !(w[0] < w[1]) {
                return Err(invalid(format!(
                    "junctions must be strictly increasing: {} !< {}",
                    w[0], w[1]
                )));
            }
        }
        for (s, w) in self.segments.iter().zip(self.junctions.windows(2)) {
            if (s.x_lo - w[0]).abs() > 1e-12 || (s.x_hi - w[1]).abs() > 1e-12 {
                return Err(invalid("segment bounds disagree with junction list"));
            }
            // Profiles vanish at segment ends by the M >= L·tanθ + eps
            // invariant; check continuity against numerical noise anyway.
            for x in [s.x_lo, s.x_hi] {
                if s.height(x).abs() > 1e-9 {
                    return Err(invalid(format!(
                        "top profile does not vanish at junction x = {x}"
                    )));
                }
            }
        }
        Ok(self)
    }

    pub fn x_left(&self) -> f64 {
        self.junctions[0]
    }

    pub fn x_right(&self) -> f64 {
        *self.junctions.last().unwrap()
    }

    /// Top profile H(x).
    pub fn height(&self, x: f64) -> f64 {
        self.segment_at(x).height(x)
    }

    /// Top profile derivative H'(x).
    pub fn slope(&self, x: f64) -> f64 {
        self.segment_at(x).slope(x)
    }

    fn segment_at(&self, x: f64) -> &Segment {
        let i = match self
            .junctions
            .binary_search_by(|j| j.partial_cmp(&x).unwrap())
        {
            Ok(i) => i.min(self.segments.len() - 1),
            Err(i) => i.saturating_sub(1).min(self.segments.len() - 1),
        };
        &self.segments[i]
    }

    /// Lipschitz bound of H: max of cot(theta) over the block segments.
    pub fn lipschitz(&self) -> f64 {
        self.segments
            .iter()
            .filter_map(|s| match &s.shape {
                Shape::Flat => None,
                Shape::Block { profile, .. } => Some(profile.params.cot()),
            })
            .fold(0.0, f64::max)
    }

    /// Maximum of H (peak of the tallest block).
    pub fn max_height(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| match &s.shape {
                Shape::Flat => 0.0,
                Shape::Block { profile, scale, .. } => scale * profile.peak(),
            })
            .fold(0.0, f64::max)
    }
}

/// A single building block scaled by `c`, on x ∈ (-cM, cM), truncated below
/// at y = -depth.
pub fn build_block(params: SectorBlockParams, c: f64, depth: f64) -> Result<PlanarDomain> {
    if !(c > 0.0) {
        return Err(invalid(format!("scale c = {c} must be > 0")));
    }
    let profile = MollifiedProfile::new(params)?;
    let half = c * params.m;
    PlanarDomain {
        segments: vec![Segment {
            x_lo: -half,
            x_hi: half,
            shape: Shape::Block {
                profile,
                center: 0.0,
                scale: c,
            },
        }],
        junctions: vec![-half, half],
        depth,
    }
    .validate()
}

/// Chain description: alternating odd/even blocks scaled geometrically by
/// `t`, flat tails on both sides, common bottom depth.
#[derive(Debug, Clone)]
pub struct ChainSpec {
    pub block_odd: SectorBlockParams,
    pub block_even: SectorBlockParams,
    /// Scale ratio in (0, 1); block n (1-based) carries scale t^(n-1).
    pub t: f64,
    pub n_blocks: usize,
    pub tail_left: f64,
    pub tail_right: f64,
    pub depth: f64,
}

impl ChainSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0 && self.t < 1.0) {
            return Err(invalid(format!("t = {} must lie in (0, 1)", self.t)));
        }
        if !(self.tail_left > 0.0 && self.tail_right > 0.0) {
            return Err(invalid("tail lengths must be > 0"));
        }
        if !(self.depth > 0.0) {
            return Err(invalid("depth must be > 0"));
        }
        Ok(())
    }

    /// The frequency ratio gamma = 1/t separating the two α-sequences.
    pub fn gamma(&self) -> f64 {
        1.0 / self.t
    }

    /// Parameters and scale of block n (1-based).
    pub fn block(&self, n: usize) -> (SectorBlockParams, f64) {
        let params = if n % 2 == 1 {
            self.block_odd
        } else {
            self.block_even
        };
        (params, self.t.powi(n as i32 - 1))
    }
}

/// Glue `n_blocks` scaled blocks between the flat tails. Junction abscissas
/// accumulate the scaled block widths left to right starting at x = 0.
pub fn build_chain_domain(spec: &ChainSpec) -> Result<PlanarDomain> {
    spec.validate()?;
    let mut junctions = vec![0.0, spec.tail_left];
    let mut segments = vec![Segment {
        x_lo: 0.0,
        x_hi: spec.tail_left,
        shape: Shape::Flat,
    }];
    let mut x = spec.tail_left;
    for n in 1..=spec.n_blocks {
        let (params, c) = spec.block(n);
        let profile = MollifiedProfile::new(params)?;
        let width = 2.0 * c * params.m;
        segments.push(Segment {
            x_lo: x,
            x_hi: x + width,
            shape: Shape::Block {
                profile,
                center: x + 0.5 * width,
                scale: c,
            },
        });
        x += width;
        junctions.push(x);
    }
    segments.push(Segment {
        x_lo: x,
        x_hi: x + spec.tail_right,
        shape: Shape::Flat,
    });
    junctions.push(x + spec.tail_right);
    PlanarDomain {
        segments,
        junctions,
        depth: spec.depth,
    }
    .validate()
}

/// Parse a chain config: `key = value` lines, `#` comments, angles in
/// degrees. `depth` may be omitted and defaults to max block height + 2.
pub fn parse_chain_config(text: &str) -> Result<ChainSpec> {
    use std::collections::HashMap;
    let mut map: HashMap<&str, (f64, usize)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or(Error::ConfigParse {
            line,
            message: format!("expected `key = value`, got `{body}`"),
        })?;
        let key = key.trim();
        let value: f64 = value.trim().parse().map_err(|_| Error::ConfigParse {
            line,
            message: format!("`{}` is not a number", value.trim()),
        })?;
        const KEYS: [&str; 13] = [
            "theta_odd_deg",
            "theta_even_deg",
            "L_odd",
            "L_even",
            "eps_odd",
            "eps_even",
            "M_odd",
            "M_even",
            "t",
            "n_blocks",
            "tail_left",
            "tail_right",
            "depth",
        ];
        let canonical = KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or(Error::ConfigParse {
                line,
                message: format!("unknown key `{key}`"),
            })?;
        if map.insert(canonical, (value, line)).is_some() {
            return Err(Error::ConfigParse {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
    }
    let get = |key: &str| -> Result<f64> {
        map.get(key).map(|&(v, _)| v).ok_or(Error::ConfigParse {
            line: 0,
            message: format!("missing key `{key}`"),
        })
    };
    let deg = std::f64::consts::PI / 180.0;
    let block_odd = SectorBlockParams::new(
        get("theta_odd_deg")? * deg,
        get("L_odd")?,
        get("eps_odd")?,
        get("M_odd")?,
    )?;
    let block_even = SectorBlockParams::new(
        get("theta_even_deg")? * deg,
        get("L_even")?,
        get("eps_even")?,
        get("M_even")?,
    )?;
    let n_blocks_f = get("n_blocks")?;
    if n_blocks_f < 0.0 || n_blocks_f.fract() != 0.0 {
        return Err(invalid(format!(
            "n_blocks = {n_blocks_f} must be a nonnegative integer"
        )));
    }
    let t = get("t")?;
    let n_blocks = n_blocks_f as usize;
    let depth = match map.get("depth") {
        Some(&(v, _)) => v,
        None => {
            // Tallest block height + 2, matching the mesh depth heuristic.
            let mut h: f64 = 0.0;
            for n in 1..=n_blocks.max(1) {
                let params = if n % 2 == 1 { block_odd } else { block_even };
                h = h.max(t.powi(n as i32 - 1) * params.l);
            }
            h + 2.0
        }
    };
    let spec = ChainSpec {
        block_odd,
        block_even,
        t,
        n_blocks,
        tail_left: get("tail_left")?,
        tail_right: get("tail_right")?,
        depth,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};

    #[test]
    fn tent_values() {
        assert_eq!(tent_profile(FRAC_PI_4, 1.0, 0.0).unwrap(), 1.0);
        assert_eq!(tent_profile(FRAC_PI_4, 1.0, 2.0).unwrap(), 0.0);
        let edge = 2.0 * FRAC_PI_6.tan();
        assert!(tent_profile(FRAC_PI_6, 2.0, edge).unwrap().abs() < 1e-12);
        assert!(tent_profile(-0.1, 1.0, 0.0).is_err());
        assert!(tent_profile(FRAC_PI_4, 0.0, 0.0).is_err());
    }

    #[test]
    fn mollifier_basics() {
        assert_eq!(mollifier_eval(1.0, 1.0).unwrap(), 0.0);
        assert_eq!(mollifier_eval(1.0, -1.5).unwrap(), 0.0);
        for &x in &[0.0, 0.3, 0.77, 0.999] {
            let p = mollifier_eval(0.25, x * 0.25).unwrap();
            let m = mollifier_eval(0.25, -x * 0.25).unwrap();
            assert_eq!(p, m);
            assert!(p >= 0.0);
        }
        assert!(mollifier_eval(0.0, 0.0).is_err());
    }

    #[test]
    fn mollifier_normalization() {
        // Z computed independently with 30-digit arithmetic.
        assert!((mollifier_norm() - 0.443993816168079437823).abs() < 1e-13);
        let eps = 0.37;
        let mass = adaptive_simpson(
            &mut |x| mollifier_eval(eps, x).unwrap(),
            -eps,
            eps,
            1e-14,
        )
        .unwrap();
        assert!((mass - 1.0).abs() < 1e-12, "mass = {mass}");
    }

    #[test]
    fn profile_matches_tent_outside_corner_zones() {
        let params = SectorBlockParams::new(FRAC_PI_4, 1.0, 0.1, 1.2).unwrap();
        let p = MollifiedProfile::new(params).unwrap();
        assert!((p.height(0.5) - 0.5).abs() < 1e-12);
        assert!((p.slope(0.5) + 1.0).abs() < 1e-12);

        let params = SectorBlockParams::new(FRAC_PI_6, 2.0, 0.05, 4.0).unwrap();
        let p = MollifiedProfile::new(params).unwrap();
        assert_eq!(p.height(3.6), 0.0);
        assert_eq!(p.slope(3.6), 0.0);
    }

    #[test]
    fn profile_derivative_bound_and_symmetry() {
        let params = SectorBlockParams::new(FRAC_PI_6, 1.0, 0.2, 2.0).unwrap();
        let p = MollifiedProfile::new(params).unwrap();
        let cot = params.cot();
        let half = p.half_width();
        for i in 0..=2000 {
            let x = -half - 0.1 + (2.0 * half + 0.2) * i as f64 / 2000.0;
            assert!(p.slope(x).abs() <= cot + 1e-10, "x = {x}");
            assert_eq!(p.height(x), p.height(-x));
            assert!(p.height(x) >= 0.0);
        }
    }

    #[test]
    fn profile_sup_distance_decreases_with_eps() {
        let mut last = f64::INFINITY;
        for &eps in &[0.4, 0.2, 0.1, 0.05] {
            let params = SectorBlockParams::new(FRAC_PI_4, 2.0, eps, 3.0).unwrap();
            let p = MollifiedProfile::new(params).unwrap();
            let sup = (0..=4000)
                .map(|i| {
                    let x = -3.0 + 6.0 * i as f64 / 4000.0;
                    (p.height(x) - tent_profile(FRAC_PI_4, 2.0, x).unwrap()).abs()
                })
                .fold(0.0, f64::max);
            assert!(sup < last, "eps = {eps}: sup {sup} !< {last}");
            last = sup;
        }
    }

    #[test]
    fn block_domain_geometry() {
        let params = SectorBlockParams::new(FRAC_PI_4, 1.0, 0.1, 1.2).unwrap();
        let d = build_block(params, 1.0, 2.0).unwrap();
        assert!(d.height(params.m).abs() < 1e-12);
        assert!(d.height(-params.m).abs() < 1e-12);
        // Homothety: c = 2 doubles every coordinate.
        let d2 = build_block(params, 2.0, 2.0).unwrap();
        for i in 0..=40 {
            let x = -params.m + 2.0 * params.m * i as f64 / 40.0;
            assert!((d2.height(2.0 * x) - 2.0 * d.height(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_continuity_and_lipschitz() {
        let spec = ChainSpec {
            block_odd: SectorBlockParams::new(PI / 3.0, 2.0, 0.2, 4.0).unwrap(),
            block_even: SectorBlockParams::new(FRAC_PI_6, 2.0, 0.1, 1.3).unwrap(),
            t: 0.5,
            n_blocks: 3,
            tail_left: 1.0,
            tail_right: 1.5,
            depth: 4.0,
        };
        let d = build_chain_domain(&spec).unwrap();
        assert_eq!(d.junctions.len(), spec.n_blocks + 3);
        for &a in &d.junctions {
            let x = a.clamp(d.x_left(), d.x_right());
            assert!(d.height(x).abs() < 1e-9, "H({x}) != 0");
        }
        let lip = d.lipschitz();
        assert!((lip - FRAC_PI_6.tan().recip()).abs() < 1e-12);
        // Dense finite differences stay below the Lipschitz constant.
        let n = 20_000;
        let (xl, xr) = (d.x_left(), d.x_right());
        let mut prev = d.height(xl);
        let dx = (xr - xl) / n as f64;
        for i in 1..=n {
            let x = xl + i as f64 * dx;
            let h = d.height(x);
            assert!(
                (h - prev).abs() <= lip * dx * (1.0 + 1e-6),
                "x = {x}: |{h} - {prev}| > {}",
                lip * dx
            );
            prev = h;
        }
    }

    #[test]
    fn chain_zero_blocks_is_flat_box() {
        let spec = ChainSpec {
            block_odd: SectorBlockParams::new(FRAC_PI_4, 1.0, 0.1, 1.2).unwrap(),
            block_even: SectorBlockParams::new(FRAC_PI_4, 1.0, 0.1, 1.2).unwrap(),
            t: 0.5,
            n_blocks: 0,
            tail_left: 2.0,
            tail_right: 3.0,
            depth: 1.0,
        };
        let d = build_chain_domain(&spec).unwrap();
        assert_eq!(d.max_height(), 0.0);
        assert_eq!(d.x_right() - d.x_left(), 5.0);
    }

    #[test]
    fn config_parsing() {
        let text = "\
# sample chain
theta_odd_deg = 60
theta_even_deg = 30
L_odd = 6
L_even = 6
eps_odd = 0.3
eps_even = 0.05
M_odd = 11.4
M_even = 4.46
t = 0.03125
n_blocks = 2
tail_left = 4
tail_right = 4
depth = 8
";
        let spec = parse_chain_config(text).unwrap();
        assert_eq!(spec.n_blocks, 2);
        assert!((spec.gamma() - 32.0).abs() < 1e-12);
        assert!((spec.block(2).1 - 0.03125).abs() < 1e-15);

        let err = parse_chain_config("bogus = 1\n").unwrap_err();
        assert!(matches!(err, Error::ConfigParse { line: 1, .. }));
        let err = parse_chain_config("theta_odd_deg : 60\n").unwrap_err();
        assert!(matches!(err, Error::ConfigParse { line: 1, .. }));
    }
}
