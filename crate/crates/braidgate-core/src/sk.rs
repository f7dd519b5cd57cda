//! Solovay-Kitaev refinement for two-dimensional gate sets.
//!
//! The recursion is the classical one: approximate the target coarsely,
//! write the residue as a group commutator of two small rotations, and
//! approximate those recursively. All of that runs in `f64` — it only ever
//! *proposes* candidate words. Every proposal is then certified with exact
//! arithmetic by [`crate::compiler::certify`], and the reported result is
//! the best *certified* candidate across recursion depths, with depth zero
//! defined as plain brute-force search at the base-net length. So the
//! returned bound can only improve as the recursion deepens, and nothing
//! floating-point ever leaks into it.
//!
//! The construction assumes the gates are (close to) unitary and generate a
//! dense subgroup of SU(2); neither is checked. When the assumption fails
//! the proposals are poor, the certificates say so honestly, and the result
//! degrades to the brute-force baseline.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use libm::{asin, atan2, cos, sin, sqrt};
use num_traits::ToPrimitive;

use crate::compiler::{brute_force_compile, certify, CompileResult, CompileTarget, GateSet};
use crate::cyclotomic::Cyclotomic;
use crate::error::Error;
use crate::matrix::Matrix;
use crate::rational::{rat_int, Rational};

/// Tuning knobs: how long the words in the floating-point base net may get,
/// and how many commutator refinement rounds to run on top of it.
#[derive(Clone, Copy, Debug)]
pub struct SkParams {
    pub base_net_depth: usize,
    pub recursion_depth: usize,
}

// ---------------------------------------------------------------------------
// Minimal f64 complex 2x2 toolkit. Row-major [a, b, c, d] = [[a, b], [c, d]].
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> C64 {
        C64 { re, im }
    }

    fn zero() -> C64 {
        C64::new(0.0, 0.0)
    }

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }

    fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }

    fn mul(self, o: C64) -> C64 {
        C64::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }

    fn conj(self) -> C64 {
        C64::new(self.re, -self.im)
    }

    fn scale(self, s: f64) -> C64 {
        C64::new(self.re * s, self.im * s)
    }

    fn abs_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    fn div(self, o: C64) -> C64 {
        let d = o.abs_sq();
        self.mul(o.conj()).scale(1.0 / d)
    }

    /// Principal square root.
    fn sqrt(self) -> C64 {
        let r = sqrt(self.abs_sq());
        let re = sqrt(((r + self.re) / 2.0).max(0.0));
        let im = sqrt(((r - self.re) / 2.0).max(0.0));
        C64::new(re, if self.im < 0.0 { -im } else { im })
    }
}

type M2 = [C64; 4];

fn m_id() -> M2 {
    [C64::one(), C64::zero(), C64::zero(), C64::one()]
}

fn m_mul(a: &M2, b: &M2) -> M2 {
    [
        a[0].mul(b[0]).add(a[1].mul(b[2])),
        a[0].mul(b[1]).add(a[1].mul(b[3])),
        a[2].mul(b[0]).add(a[3].mul(b[2])),
        a[2].mul(b[1]).add(a[3].mul(b[3])),
    ]
}

fn m_inverse(a: &M2) -> M2 {
    let det = a[0].mul(a[3]).sub(a[1].mul(a[2]));
    [
        a[3].div(det),
        a[1].scale(-1.0).div(det),
        a[2].scale(-1.0).div(det),
        a[0].div(det),
    ]
}

/// Divide by a square root of the determinant, landing in SU(2) when the
/// input is unitary. Near-singular inputs are returned unchanged.
fn m_to_su2(a: &M2) -> M2 {
    let det = a[0].mul(a[3]).sub(a[1].mul(a[2]));
    if det.abs_sq() < 1e-24 {
        return *a;
    }
    let s = det.sqrt();
    [a[0].div(s), a[1].div(s), a[2].div(s), a[3].div(s)]
}

/// The same phase-invariant distance the compiler certifies, in f64:
/// `sqrt(max(0, 1 - |tr(a^* b)| / 2))`.
fn proj_dist(a: &M2, b: &M2) -> f64 {
    let mut tr = C64::zero();
    for i in 0..4 {
        tr = tr.add(a[i].conj().mul(b[i]));
    }
    sqrt((1.0 - sqrt(tr.abs_sq()) / 2.0).max(0.0))
}

// ---------------------------------------------------------------------------
// Axis-angle form on SU(2): U = cos(t/2) I - i sin(t/2) (n . sigma).
// ---------------------------------------------------------------------------

struct AxisAngle {
    sin_half: f64,
    axis: [f64; 3],
}

fn axis_angle(u: &M2) -> AxisAngle {
    let cos_half = ((u[0].re + u[3].re) / 2.0).clamp(-1.0, 1.0);
    let sin_half = sqrt((1.0 - cos_half * cos_half).max(0.0));
    if sin_half < 1e-12 {
        return AxisAngle { sin_half: 0.0, axis: [0.0, 0.0, 1.0] };
    }
    let axis = [
        -(u[1].im + u[2].im) / (2.0 * sin_half),
        (u[2].re - u[1].re) / (2.0 * sin_half),
        -(u[0].im - u[3].im) / (2.0 * sin_half),
    ];
    AxisAngle { sin_half, axis }
}

fn rot_about(axis: [f64; 3], angle: f64) -> M2 {
    let c = cos(angle / 2.0);
    let s = sin(angle / 2.0);
    let [nx, ny, nz] = axis;
    [
        C64::new(c, -s * nz),
        C64::new(-s * ny, -s * nx),
        C64::new(s * ny, -s * nx),
        C64::new(c, s * nz),
    ]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    sqrt(dot(a, a))
}

/// Write `delta` (in SU(2)) as approximately `V W V^-1 W^-1` and return
/// `(V, W)`. Both factors are rotations by a common *balanced* angle, so the
/// recursion hands its children strictly easier problems.
fn commutator_factors(delta: &M2) -> (M2, M2) {
    let aa = axis_angle(delta);
    if aa.sin_half == 0.0 {
        return (m_id(), m_id());
    }
    // The commutator of rotations by phi about the x and y axes rotates by
    // theta with sin(theta/2) = 2 sin^2(phi/2) sqrt(1 - sin^4(phi/2)); that
    // expression climbs from 0 to 1 while sin^2(phi/2) grows to 1/sqrt(2),
    // so the equation below has a unique root in [0, phi_max].
    let target = aa.sin_half;
    let phi_max = 2.0 * asin(sqrt(core::f64::consts::FRAC_1_SQRT_2));
    let f = |phi: f64| {
        let s2 = sin(phi / 2.0) * sin(phi / 2.0);
        2.0 * s2 * sqrt((1.0 - s2 * s2).max(0.0)) - target
    };
    let mut lo = 0.0;
    let mut hi = phi_max;
    for _ in 0..80 {
        let mid = (lo + hi) / 2.0;
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let phi = (lo + hi) / 2.0;
    let v = rot_about([1.0, 0.0, 0.0], phi);
    let w = rot_about([0.0, 1.0, 0.0], phi);

    // Conjugate so the commutator's rotation axis lands on delta's axis.
    let k = m_mul(&m_mul(&v, &w), &m_mul(&m_inverse(&v), &m_inverse(&w)));
    let ka = axis_angle(&k);
    let c = cross(ka.axis, aa.axis);
    let n = norm(c);
    let s = if n < 1e-12 {
        if dot(ka.axis, aa.axis) > 0.0 {
            m_id()
        } else {
            // Antipodal axes: half-turn about any perpendicular direction.
            let helper =
                if ka.axis[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
            let p = cross(ka.axis, helper);
            let pn = norm(p);
            rot_about([p[0] / pn, p[1] / pn, p[2] / pn], core::f64::consts::PI)
        }
    } else {
        let axis = [c[0] / n, c[1] / n, c[2] / n];
        rot_about(axis, atan2(n, dot(ka.axis, aa.axis)))
    };
    let s_inv = m_inverse(&s);
    (m_mul(&m_mul(&s, &v), &s_inv), m_mul(&m_mul(&s, &w), &s_inv))
}

// ---------------------------------------------------------------------------
// The base net and the recursion.
// ---------------------------------------------------------------------------

struct NetEntry {
    word: Vec<usize>,
    m: M2,
}

fn cyclo_c64(z: &Cyclotomic) -> C64 {
    let order = z.order() as f64;
    let mut out = C64::zero();
    for (k, c) in z.coeffs().iter().enumerate() {
        let c = c.to_f64().unwrap_or(0.0);
        let angle = core::f64::consts::TAU * (k as f64) / order;
        out = out.add(C64::new(c * cos(angle), c * sin(angle)));
    }
    out
}

fn matrix_m2(m: &Matrix<Cyclotomic>) -> M2 {
    [
        cyclo_c64(m.get(0, 0)),
        cyclo_c64(m.get(0, 1)),
        cyclo_c64(m.get(1, 0)),
        cyclo_c64(m.get(1, 1)),
    ]
}

fn target_m2(target: &CompileTarget) -> M2 {
    match target {
        CompileTarget::Exact(m) => matrix_m2(m),
        CompileTarget::Numeric(m) => {
            let e = |r: usize, c: usize| {
                C64::new(m.get(r, c).re().to_f64(), m.get(r, c).im().to_f64())
            };
            [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]
        }
    }
}

/// Every freely reduced word up to the net depth, in the same canonical
/// order the exhaustive search uses, with near-duplicates (anything within
/// 1e-9 of an earlier entry) dropped so the shortest representative stays.
fn build_net(gates: &GateSet, depth: usize) -> Vec<NetEntry> {
    let mats: Vec<M2> = gates.gates().iter().map(|g| matrix_m2(g.matrix())).collect();
    let mut raw: Vec<NetEntry> = Vec::new();
    raw.push(NetEntry { word: Vec::new(), m: m_id() });
    let mut word = Vec::new();
    for level in 1..=depth {
        for first in 0..gates.len() {
            word.push(first);
            let m = mats[first];
            net_descend(gates, &mats, &mut word, m, level - 1, &mut raw);
            word.pop();
        }
    }
    let mut net: Vec<NetEntry> = Vec::new();
    for entry in raw {
        if net.iter().all(|kept| proj_dist(&kept.m, &entry.m) > 1e-9) {
            net.push(entry);
        }
    }
    net
}

fn net_descend(
    gates: &GateSet,
    mats: &[M2],
    word: &mut Vec<usize>,
    m: M2,
    remaining: usize,
    out: &mut Vec<NetEntry>,
) {
    if remaining == 0 {
        out.push(NetEntry { word: word.clone(), m });
        return;
    }
    let prev = *word.last().expect("net words start with a letter");
    for next in 0..gates.len() {
        if gates.inverse_index(prev) == next {
            continue;
        }
        word.push(next);
        net_descend(gates, mats, word, m_mul(&m, &mats[next]), remaining - 1, out);
        word.pop();
    }
}

fn nearest<'a>(net: &'a [NetEntry], u: &M2, lookups: &mut u64) -> &'a NetEntry {
    *lookups += 1;
    let mut best = &net[0];
    let mut best_d = proj_dist(&best.m, u);
    for entry in &net[1..] {
        let d = proj_dist(&entry.m, u);
        if d < best_d {
            best = entry;
            best_d = d;
        }
    }
    best
}

fn sk_approx(
    gates: &GateSet,
    net: &[NetEntry],
    u: &M2,
    depth: usize,
    lookups: &mut u64,
) -> (Vec<usize>, M2) {
    if depth == 0 {
        let hit = nearest(net, u, lookups);
        return (hit.word.clone(), hit.m);
    }
    let (w_prev, m_prev) = sk_approx(gates, net, u, depth - 1, lookups);
    let delta = m_to_su2(&m_mul(u, &m_inverse(&m_prev)));
    let (v, w) = commutator_factors(&delta);
    let (wv, mv) = sk_approx(gates, net, &v, depth - 1, lookups);
    let (ww, mw) = sk_approx(gates, net, &w, depth - 1, lookups);
    let mut word = wv.clone();
    word.extend_from_slice(&ww);
    word.extend_from_slice(&gates.invert_indices(&wv));
    word.extend_from_slice(&gates.invert_indices(&ww));
    word.extend_from_slice(&w_prev);
    let word = gates.free_reduce_indices(&word);
    let m = m_mul(
        &m_mul(&m_mul(&mv, &mw), &m_mul(&m_inverse(&mv), &m_inverse(&mw))),
        &m_prev,
    );
    (word, m)
}

/// Compile `target` over a two-dimensional gate set by Solovay-Kitaev
/// refinement. Depth zero is brute force over words up to the base-net
/// length; each deeper round proposes one commutator-corrected word and the
/// best certified bound so far is kept, so the reported error is monotone
/// nonincreasing in `recursion_depth`. `depth` in the result is the level
/// of refinement that produced the winning word (zero for the baseline).
pub fn solovay_kitaev(
    gates: &GateSet,
    target: &CompileTarget,
    params: &SkParams,
    eps: &Rational,
) -> Result<CompileResult, Error> {
    if gates.dim() != 2 {
        return Err(Error::SolovayKitaevDimension { dim: gates.dim() });
    }
    let base = brute_force_compile(gates, target, params.base_net_depth, eps)?;
    let mut best_word = base.word;
    let mut best_bound = base.certified_error;
    let mut best_depth = 0usize;
    let mut nodes = base.nodes;
    if params.recursion_depth == 0 || best_bound <= rat_int(0) {
        return Ok(CompileResult {
            word: best_word,
            certified_error: best_bound,
            nodes,
            depth: 0,
        });
    }
    let net = build_net(gates, params.base_net_depth);
    let u = target_m2(target);
    let mut lookups: u64 = 0;
    for depth in 1..=params.recursion_depth {
        let (indices, _) = sk_approx(gates, &net, &u, depth, &mut lookups);
        let labels: Vec<String> =
            indices.iter().map(|&i| gates.gate(i).label().to_string()).collect();
        let bound = certify(gates, &labels, target, eps)?;
        if bound < best_bound {
            best_word = labels;
            best_bound = bound;
            best_depth = depth;
        }
    }
    nodes += lookups * net.len() as u64;
    Ok(CompileResult {
        word: best_word,
        certified_error: best_bound,
        nodes,
        depth: best_depth,
    })
}
