//! Files written by a run.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use anyhow::{Context, Result};
use bfd_core::adapt::LevelSnapshot;
use bfd_core::mesh::{CellFields, Subdomain};
use bfd_core::metrics::ConvergenceRecord;

pub const HISTORY_COLUMNS: [&str; 20] = [
    "level", "DoF", "hB", "hD", "hSigma", "e_uB", "r_uB", "e_pB", "r_pB", "e_uD", "r_uD", "e_pD", "r_pD", "e_lambda",
    "r_lambda", "e_total", "r_total", "theta", "eff", "newton_iters",
];

/// Six significant digits in scientific notation; empty when unavailable.
fn sci(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.5e}"),
        _ => String::new(),
    }
}

pub fn history_row(r: &ConvergenceRecord<f64>) -> Vec<String> {
    let e = r.errors;
    let rate = |i: usize| r.rates.map(|q| q[i]);
    vec![
        r.level.to_string(),
        r.dof.to_string(),
        sci(Some(r.h_b)),
        sci(Some(r.h_d)),
        sci(Some(r.h_sigma)),
        sci(e.map(|e| e.u_b)),
        sci(rate(0)),
        sci(e.map(|e| e.p_b)),
        sci(rate(1)),
        sci(e.map(|e| e.u_d)),
        sci(rate(2)),
        sci(e.map(|e| e.p_d)),
        sci(rate(3)),
        sci(e.map(|e| e.lambda)),
        sci(rate(4)),
        sci(e.map(|e| e.total())),
        sci(rate(5)),
        sci(Some(r.theta)),
        sci(r.effectivity),
        r.newton_iterations.to_string(),
    ]
}

pub fn write_history(path: &Path, records: &[ConvergenceRecord<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(HISTORY_COLUMNS)?;
    for r in records {
        w.write_record(history_row(r))?;
    }
    w.flush()?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

/// `level_k/mesh.vtk` (with the indicators and the marking),
/// `level_k/estimator.csv` and `level_k/solution.vtk`.
pub fn write_level(out: &Path, snap: &LevelSnapshot<f64>) -> Result<()> {
    let dir = out.join(format!("level_{}", snap.record.level));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let mesh = snap.mesh();
    let nt = mesh.num_triangles();

    let mut marked = vec![0.0; nt];
    for &t in snap.marked {
        marked[t] = 1.0;
    }
    let mesh_fields = snap.estimator.cell_fields().scalar("marked", marked);
    mesh.write_vtk(create(&dir.join("mesh.vtk"))?, "mesh", &mesh_fields)?;

    snap.estimator.write_csv(create(&dir.join("estimator.csv"))?)?;

    let sol = snap.solution;
    let mut velocity = Vec::with_capacity(nt);
    let mut pressure = Vec::with_capacity(nt);
    let mut divergence = Vec::with_capacity(nt);
    for t in 0..nt {
        let third = 1.0 / 3.0;
        match mesh.triangle(t).subdomain {
            Subdomain::Brinkman => {
                let (u, _) = sol.u_b(t, [third; 3]);
                velocity.push(u);
                divergence.push(sol.div_u_b(t, [third; 3]));
            }
            Subdomain::Darcy => {
                let c = sol.space().geometry(t).point([third; 3]);
                velocity.push(sol.u_d(t, c));
                divergence.push(sol.div_u_d(t));
            }
        }
        pressure.push(sol.p(t));
    }
    let fields = CellFields::default()
        .vector("velocity", velocity)
        .scalar("pressure", pressure)
        .scalar("divergence", divergence);
    mesh.write_vtk(create(&dir.join("solution.vtk"))?, "solution", &fields)?;
    Ok(())
}
