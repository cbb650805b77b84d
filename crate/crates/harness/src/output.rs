//! CSV emission: one diagnostics file per run plus field snapshots.
//!
//! Values are rendered with the shortest decimal form that parses back to
//! the identical f64 (Rust's Debug float formatting), so re-reading a file
//! reproduces every number bit for bit.

use crate::error::HarnessError;
use angio_core::diagnostics::DiagRecord;
use angio_core::{Grid, State};
use std::io::Write;
use std::path::Path;

fn fmt(v: f64) -> String {
    format!("{v:?}")
}

/// Fixed column order:
/// t, mass_p, mean_p, linf_p_minus_1, l2_p_minus_1, lr{r}_p_minus_1 ...,
/// w12_c, w12_w_minus_1, linf_c, grad_w_l2_sq, F, G, min_p, max_p, min_w, max_w
pub fn write_csv(records: &[DiagRecord], lr: &[u32], path: &Path) -> Result<(), HarnessError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);

    let mut header = String::from("t,mass_p,mean_p,linf_p_minus_1,l2_p_minus_1");
    for r in lr {
        header.push_str(&format!(",l{r}_p_minus_1"));
    }
    header.push_str(",w12_c,w12_w_minus_1,linf_c,grad_w_l2_sq,F,G,min_p,max_p,min_w,max_w");
    writeln!(out, "{header}")?;

    for rec in records {
        let mut row = vec![
            fmt(rec.t),
            fmt(rec.mass_p),
            fmt(rec.mean_p),
            fmt(rec.linf_p_minus_1),
            fmt(rec.l2_p_minus_1),
        ];
        for r in lr {
            let v = rec
                .lr_norms
                .iter()
                .find(|(rr, _)| rr == r)
                .map(|(_, v)| *v)
                .unwrap_or(f64::NAN);
            row.push(fmt(v));
        }
        row.extend([
            fmt(rec.w12_c),
            fmt(rec.w12_w_minus_1),
            fmt(rec.linf_c),
            fmt(rec.grad_w_l2_sq),
            fmt(rec.lyapunov_f),
            fmt(rec.dissipation_g),
            fmt(rec.min_p),
            fmt(rec.max_p),
            fmt(rec.min_w),
            fmt(rec.max_w),
        ]);
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// Cell-center snapshot: x (and y in 2D), p, c, w.
pub fn write_snapshot(state: &State, grid: &Grid, path: &Path) -> Result<(), HarnessError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    if grid.dim() == 1 {
        writeln!(out, "x,p,c,w")?;
        for i in 0..grid.nx() {
            writeln!(
                out,
                "{},{},{},{}",
                fmt(grid.x_center(i)),
                fmt(state.p.at(i, 0)),
                fmt(state.c.at(i, 0)),
                fmt(state.w.at(i, 0))
            )?;
        }
    } else {
        writeln!(out, "x,y,p,c,w")?;
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt(grid.x_center(i)),
                    fmt(grid.y_center(j)),
                    fmt(state.p.at(i, j)),
                    fmt(state.c.at(i, j)),
                    fmt(state.w.at(i, j))
                )?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use angio_core::diagnostics::record;
    use angio_core::{steady_state, Params};

    #[test]
    fn empty_trajectory_gives_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("diag.csv");
        write_csv(&[], &[4], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1);
        assert!(lines[0].starts_with("t,mass_p,mean_p"));
        assert!(lines[0].contains("l4_p_minus_1"));
    }

    #[test]
    fn single_equilibrium_record_has_f_minus_measure() {
        let g = Grid::new_1d(1.0, 16).unwrap();
        let s = steady_state(&g);
        let rec = record(&s, &Params::default(), &g, 1.0, &[4]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("diag.csv");
        write_csv(&[rec], &[4], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let data_line = text.lines().nth(1).unwrap();
        let cols: Vec<&str> = data_line.split(',').collect();
        // F is the 11th column with one lr entry
        let f: f64 = cols[10].parse().unwrap();
        assert_eq!(f, -1.0);
    }

    #[test]
    fn rows_round_trip_bit_exactly() {
        let g = Grid::new_1d(1.0, 16).unwrap();
        let mut s = steady_state(&g);
        // make the values less trivial
        for (k, v) in s.p.data_mut().iter_mut().enumerate() {
            *v = 1.0 + 1e-3 * ((k as f64) * 0.7).sin();
        }
        s.t = 0.123456789;
        let rec = record(&s, &Params::default(), &g, 1.2345, &[4]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("diag.csv");
        write_csv(std::slice::from_ref(&rec), &[4], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let cols: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[0], rec.t);
        assert_eq!(cols[1], rec.mass_p);
        assert_eq!(cols[4], rec.l2_p_minus_1);
        assert_eq!(cols[10], rec.lyapunov_f);
        assert_eq!(cols[11], rec.dissipation_g);
    }

    #[test]
    fn snapshot_has_one_row_per_cell() {
        let g = Grid::new_1d(1.0, 4).unwrap();
        let s = steady_state(&g);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.csv");
        write_snapshot(&s, &g, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "x,p,c,w");
        for line in &lines[1..] {
            assert!(line.ends_with(",1.0,0.0,1.0"));
        }
    }
}
