//! Diagram operations on polyhedra and affine maps.

use num_traits::Zero;

use super::affine::AffineMap;
use super::fm::project;
use super::lattice::integral_left_inverse;
use super::linalg::{rank, solve};
use super::polyhedron::{Constraint, Polyhedron};
use super::rational::{dot_ir, is_integral, rat_from_int, to_rats, Int, Rat};
use crate::error::{dims, Error, Result};

/// Image of `p` under `a`, by eliminating the source variables from the
/// graph of `a` over `p`.
pub fn image(p: &Polyhedron, a: &AffineMap) -> Result<Polyhedron> {
    let n = a.source_dim();
    let m = a.target_dim();
    if p.ambient_dim() != n {
        return Err(dims("image source", n, p.ambient_dim()));
    }
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    let lift = |c: &Constraint| {
        let mut normal = c.normal.clone();
        normal.resize(n + m, Int::zero());
        Constraint::new(normal, c.offset.clone())
    };
    ineqs.extend(p.inequalities().iter().map(lift));
    eqs.extend(p.equalities().iter().map(lift));
    for (i, (row, t)) in a.linear().iter().zip(a.translate()).enumerate() {
        // y_i - L_i x = t_i
        let mut normal: Vec<Int> = row.iter().map(|x| -x).collect();
        normal.resize(n + m, Int::zero());
        normal[n + i] = Int::from(1);
        eqs.push(Constraint::new(normal, t.clone()));
    }
    let graph = Polyhedron::raw(n + m, ineqs, eqs);
    let keep: Vec<usize> = (n..n + m).collect();
    Ok(project(&graph, &keep).canonical())
}

/// `{x : a(x) ∈ p}`.
pub fn preimage(p: &Polyhedron, a: &AffineMap) -> Result<Polyhedron> {
    if p.ambient_dim() != a.target_dim() {
        return Err(dims("preimage target", a.target_dim(), p.ambient_dim()));
    }
    let pull = |c: &Constraint| {
        // ⟨n, Lx + t⟩ = ⟨Lᵀn, x⟩ + ⟨n, t⟩
        let normal: Vec<Int> = (0..a.source_dim())
            .map(|j| c.normal.iter().zip(a.linear()).map(|(ni, row)| ni * &row[j]).sum())
            .collect();
        Constraint::new(normal, &c.offset - dot_ir(&c.normal, a.translate()))
    };
    let ineqs = p.inequalities().iter().map(pull).collect();
    let eqs = p.equalities().iter().map(pull).collect();
    Ok(Polyhedron::raw(a.source_dim(), ineqs, eqs).canonical())
}

/// `{(x, y) ∈ p1 × p2 : a1(x) = a2(y)}` with its coordinate projections.
pub fn fiber_product(
    p1: &Polyhedron,
    a1: &AffineMap,
    p2: &Polyhedron,
    a2: &AffineMap,
) -> Result<(Polyhedron, AffineMap, AffineMap)> {
    let (n1, n2) = (p1.ambient_dim(), p2.ambient_dim());
    if a1.source_dim() != n1 {
        return Err(dims("fiber product first map", n1, a1.source_dim()));
    }
    if a2.source_dim() != n2 {
        return Err(dims("fiber product second map", n2, a2.source_dim()));
    }
    if a1.target_dim() != a2.target_dim() {
        return Err(dims("fiber product common target", a1.target_dim(), a2.target_dim()));
    }
    let prod = Polyhedron::product(&[p1, p2]);
    let eqs = a1
        .linear()
        .iter()
        .zip(a2.linear())
        .zip(a1.translate().iter().zip(a2.translate()))
        .map(|((r1, r2), (t1, t2))| {
            let mut normal = r1.clone();
            normal.extend(r2.iter().map(|x| -x));
            Constraint::new(normal, t2 - t1)
        })
        .collect();
    let poly = prod.with_constraints(vec![], eqs).canonical();
    let proj1 = AffineMap::select(n1 + n2, &(0..n1).collect::<Vec<_>>());
    let proj2 = AffineMap::select(n1 + n2, &(n1..n1 + n2).collect::<Vec<_>>());
    Ok((poly, proj1, proj2))
}

/// `p ∩ {x : a1(x) = a2(x)}`.
pub fn equalizer(p: &Polyhedron, a1: &AffineMap, a2: &AffineMap) -> Result<Polyhedron> {
    let n = p.ambient_dim();
    if a1.source_dim() != n || a2.source_dim() != n {
        return Err(dims("equalizer source", n, a1.source_dim().max(a2.source_dim())));
    }
    if a1.target_dim() != a2.target_dim() {
        return Err(dims("equalizer target", a1.target_dim(), a2.target_dim()));
    }
    Ok(p.with_constraints(vec![], difference_rows(a1, a2)).canonical())
}

/// `p ∩ ⋂ {x : e(x) = x}`.
pub fn fixed_locus(p: &Polyhedron, endos: &[AffineMap]) -> Result<Polyhedron> {
    let n = p.ambient_dim();
    let id = AffineMap::identity(n);
    let mut eqs = Vec::new();
    for e in endos {
        if e.source_dim() != n || e.target_dim() != n {
            return Err(dims("fixed locus endomorphism", n, e.source_dim()));
        }
        eqs.extend(difference_rows(e, &id));
    }
    Ok(p.with_constraints(vec![], eqs).canonical())
}

/// Rows of `a1(x) = a2(x)`, skipping the vacuous ones.
fn difference_rows(a1: &AffineMap, a2: &AffineMap) -> Vec<Constraint> {
    a1.linear()
        .iter()
        .zip(a2.linear())
        .zip(a1.translate().iter().zip(a2.translate()))
        .map(|((r1, r2), (t1, t2))| {
            Constraint::new(r1.iter().zip(r2).map(|(x, y)| x - y).collect(), t2 - t1)
        })
        .filter(|c| !(c.normal.iter().all(Zero::is_zero) && c.offset.is_zero()))
        .collect()
}

/// Evidence that an affine map is an integral isomorphism onto a face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceCertificate {
    pub face: Polyhedron,
    /// Indices into the inequalities of the codomain's canonical form.
    pub tight_inequalities: Vec<usize>,
    pub inverse_on_face: AffineMap,
}

pub fn is_iso_onto_face(a: &AffineMap, src: &Polyhedron, dst: &Polyhedron) -> Option<FaceCertificate> {
    if a.source_dim() != src.ambient_dim() || a.target_dim() != dst.ambient_dim() {
        return None;
    }
    let hull = src.affine_hull()?;
    let m = a.target_dim();
    let lu: Vec<Vec<Int>> = hull.directions.iter().map(|u| a.apply_linear_int(u)).collect();
    let y = integral_left_inverse(&lu, m)?;

    let img = image(src, a).ok()?;
    let dc = dst.canonical();
    if !dc.contains_poly(&img) {
        return None;
    }
    let v = img.vrep();
    let tight: Vec<usize> = (0..dc.inequalities().len())
        .filter(|&i| {
            let c = &dc.inequalities()[i];
            v.vertices.iter().all(|x| c.value(x) == c.offset)
                && v.rays.iter().chain(&v.lines).all(|r| dot_ir(&c.normal, &to_rats(r)).is_zero())
        })
        .collect();
    let face = dc.face(&tight).canonical();
    if face != img {
        return None;
    }

    // inverse: y ↦ x0 + U Y (y - a(x0))
    let n = src.ambient_dim();
    let k = hull.directions.len();
    let linear: Vec<Vec<Int>> = (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|l| &hull.directions[l][i] * &y[l][j]).sum())
                .collect()
        })
        .collect();
    let ax0 = a.apply(&hull.point);
    let shift: Vec<Rat> = (0..n)
        .map(|i| &hull.point[i] - dot_ir(&linear[i], &ax0))
        .collect();
    let inverse_on_face = AffineMap::new(m, linear, shift).ok()?;
    Some(FaceCertificate { face, tight_inequalities: tight, inverse_on_face })
}

/// One requirement `result ∘ embed = value` on `sub`.
#[derive(Debug, Clone)]
pub struct InterpolationConstraint {
    pub embed: AffineMap,
    pub sub: Polyhedron,
    pub value: AffineMap,
}

/// The unique integral affine map on the affine hull of `ambient` meeting
/// every constraint, extended by zero on a unimodular complement.
pub fn affine_interpolate(constraints: &[InterpolationConstraint], ambient: &Polyhedron) -> Result<AffineMap> {
    let big_n = ambient.ambient_dim();
    let Some(first) = constraints.first() else {
        return Err(Error::Underdetermined);
    };
    let t = first.value.target_dim();
    let hull = ambient.affine_hull().ok_or(Error::Underdetermined)?;
    let k = hull.directions.len();
    let u_rows: Vec<Vec<Rat>> = (0..big_n)
        .map(|i| hull.directions.iter().map(|d| rat_from_int(&d[i])).collect())
        .collect();

    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Vec<Rat>> = Vec::new();
    for (ci, c) in constraints.iter().enumerate() {
        let s = c.sub.ambient_dim();
        if c.embed.source_dim() != s || c.value.source_dim() != s {
            return Err(dims("interpolation constraint source", s, c.embed.source_dim()));
        }
        if c.embed.target_dim() != big_n {
            return Err(dims("interpolation embed target", big_n, c.embed.target_dim()));
        }
        if c.value.target_dim() != t {
            return Err(dims("interpolation value target", t, c.value.target_dim()));
        }
        let Some(sh) = c.sub.affine_hull() else { continue };
        let w: Vec<Rat> = c
            .embed
            .apply(&sh.point)
            .iter()
            .zip(&hull.point)
            .map(|(a, b)| a - b)
            .collect();
        let lambda = solve(&u_rows, &w, k).ok_or_else(|| {
            Error::Inconsistent(format!("constraint {ci} is embedded outside the ambient affine hull"))
        })?;
        let mut row = vec![Rat::from_integer(Int::from(1))];
        row.extend(lambda);
        rows.push(row);
        rhs.push(c.value.apply(&sh.point));
        for d in &sh.directions {
            let ed = to_rats(&c.embed.apply_linear_int(d));
            let mu = solve(&u_rows, &ed, k).ok_or_else(|| {
                Error::Inconsistent(format!("constraint {ci} is embedded outside the ambient affine hull"))
            })?;
            let mut row = vec![Rat::zero()];
            row.extend(mu);
            rows.push(row);
            rhs.push(to_rats(&c.value.apply_linear_int(d)));
        }
    }
    if rank(&rows, k + 1) < k + 1 {
        return Err(Error::Underdetermined);
    }

    let mut g0 = Vec::with_capacity(t);
    let mut cmat: Vec<Vec<Int>> = Vec::with_capacity(t);
    for i in 0..t {
        let col: Vec<Rat> = rhs.iter().map(|r| r[i].clone()).collect();
        let x = solve(&rows, &col, k + 1)
            .ok_or_else(|| Error::Inconsistent(format!("output coordinate {i} has conflicting values")))?;
        if let Some(bad) = x[1..].iter().find(|v| !is_integral(v)) {
            return Err(Error::NonIntegral(format!(
                "output coordinate {i} has slope {} along the ambient lattice",
                super::rational::format_rat(bad)
            )));
        }
        g0.push(x[0].clone());
        cmat.push(x[1..].iter().map(|v| v.to_integer()).collect());
    }

    let y = integral_left_inverse(&hull.directions, big_n)
        .ok_or_else(|| Error::Internal("affine hull lattice basis is not saturated".into()))?;
    let linear: Vec<Vec<Int>> = cmat
        .iter()
        .map(|crow| {
            (0..big_n)
                .map(|j| crow.iter().zip(&y).map(|(c, yr)| c * &yr[j]).sum())
                .collect()
        })
        .collect();
    let translate: Vec<Rat> = linear
        .iter()
        .zip(&g0)
        .map(|(row, g)| g - dot_ir(row, &hull.point))
        .collect();
    AffineMap::new(big_n, linear, translate)
}
