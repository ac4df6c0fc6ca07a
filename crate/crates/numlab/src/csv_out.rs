//! CSV emission for external plotting.

use crate::cycles::NumericCycle;
use crate::error::Result;
use crate::ode::Trajectory;
use crate::section::SectionPoint;
use std::io::Write;

/// Writes `id,t,c0,c1,c2` rows for a set of trajectories.
pub fn write_trajectories<W: Write>(w: W, trajectories: &[Trajectory<3>]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["trajectory", "chart", "t", "c0", "c1", "c2"])?;
    for (i, tr) in trajectories.iter().enumerate() {
        for (t, y) in tr.times.iter().zip(&tr.states) {
            out.serialize((i, &tr.chart, t, y[0], y[1], y[2]))?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes `sequence,index,t,x,y,z,s0,s1` rows for section sequences.
pub fn write_sections<W: Write>(w: W, sequences: &[Vec<SectionPoint>]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["sequence", "index", "t", "x", "y", "z", "s0", "s1"])?;
    for (i, seq) in sequences.iter().enumerate() {
        for (k, p) in seq.iter().enumerate() {
            out.serialize((i, k, p.t, p.point[0], p.point[1], p.point[2], p.coords[0], p.coords[1]))?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes `surface,x,y,z` rows of sampled surfaces.
pub fn write_surfaces<W: Write>(w: W, surfaces: &[(String, Vec<[f64; 3]>)]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["surface", "x", "y", "z"])?;
    for (name, pts) in surfaces {
        for p in pts {
            out.serialize((name, p[0], p[1], p[2]))?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes one row per detected cycle.
pub fn write_cycles<W: Write>(w: W, cycles: &[NumericCycle]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["period", "x", "y", "z", "s0", "s1", "residual", "mu1_re", "mu1_im", "mu2_re", "mu2_im", "seed", "hits"])?;
    for c in cycles {
        let p = c.section_point;
        let f = c.floquet;
        out.serialize((
            c.period,
            p[0],
            p[1],
            p[2],
            c.section_coords[0],
            c.section_coords[1],
            c.residual,
            f[0][0],
            f[0][1],
            f[1][0],
            f[1][1],
            c.seed,
            c.hits,
        ))?;
    }
    out.flush()?;
    Ok(())
}
