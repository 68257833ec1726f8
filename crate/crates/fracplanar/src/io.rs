//! CSV input and output.
//!
//! Every float is written as `{:.16e}`, which gives 17 significant digits
//! and a representation that does not depend on locale.

use std::io::{Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use fracplanar_core::{Method, Trajectory};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `t,x1,x2` rows.
pub fn write_trajectory<W: Write>(out: W, traj: &Trajectory) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "x1", "x2"])?;
    for (t, x) in traj.iter() {
        w.write_record([fmt_f64(t), fmt_f64(x[0]), fmt_f64(x[1])])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `t, t^ν x1, t^ν x2`.
pub fn write_scaled<W: Write>(out: W, traj: &Trajectory, nu: f64) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "tnu_x1", "tnu_x2"])?;
    for (t, x) in traj.iter() {
        let s = t.powf(nu);
        w.write_record([fmt_f64(t), fmt_f64(s * x[0]), fmt_f64(s * x[1])])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `t,value,family,index` rows for one kernel.
pub fn write_kernel<W: Write>(out: W, ts: &[f64], values: &[f64], family: &str, index: &str) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "value", "family", "index"])?;
    for (t, v) in ts.iter().zip(values) {
        w.write_record([fmt_f64(*t), fmt_f64(*v), family.to_string(), index.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_trajectory(path: &Path, traj: &Trajectory) -> Result<()> {
    let file = std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    write_trajectory(std::io::BufWriter::new(file), traj)
}

/// Reads a `t,x1,x2` file written by [`write_trajectory`].
///
/// The time grid must be uniform to a relative `1e-6` of the step.
pub fn read_trajectory<R: Read>(input: R, method: Method) -> Result<Trajectory> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.len() != 3 {
        bail!("expected three columns t,x1,x2, found {}", headers.len());
    }
    let mut ts = Vec::new();
    let mut samples = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| -> Result<f64> {
            rec[i].trim().parse::<f64>().with_context(|| format!("row {}: bad number {:?}", line + 2, &rec[i]))
        };
        ts.push(field(0)?);
        samples.push([field(1)?, field(2)?]);
    }
    if ts.len() < 2 {
        bail!("a trajectory needs at least two rows");
    }
    let h = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
    if !(h > 0.0) {
        bail!("time column must be increasing");
    }
    for (n, t) in ts.iter().enumerate() {
        if ((ts[0] + n as f64 * h) - t).abs() > 1e-6 * h {
            bail!("time grid is not uniform near t = {t}");
        }
    }
    Ok(Trajectory::new(ts[0], h, samples, method))
}

pub fn load_trajectory(path: &Path) -> Result<Trajectory> {
    let file = std::fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_trajectory(std::io::BufReader::new(file), Method::PiTrapezoidal)
        .with_context(|| format!("in {}", path.display()))
}
