//! File formats: camera JSON, flow-field CSV, ego/trajectory CSV and
//! the benchmark results/summary CSVs.
//!
//! Flow values are written as decimal text with 12 significant digits
//! so a write/read round trip reproduces values to 1e-9.

use std::fs;
use std::path::Path;

use crate::bench::{BenchmarkSummary, TrialResult};
use crate::flow::{CameraModel, EgoMotion, FlowVector};
use crate::geometry::Point2;
use crate::{Error, Result};

fn fmt12(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.11e}")
    }
}

pub fn read_camera_json(path: &Path) -> Result<CameraModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_camera_json(path: &Path, cam: &CameraModel) -> Result<()> {
    let text = serde_json::to_string_pretty(cam)?;
    fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Writes a flow field as `t,x,y,u,v` CSV.
pub fn write_flow_csv(path: &Path, flow: &[FlowVector]) -> Result<()> {
    let mut out = String::from("t,x,y,u,v\n");
    for f in flow {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt12(f.t),
            fmt12(f.pos.x),
            fmt12(f.pos.y),
            fmt12(f.u),
            fmt12(f.v)
        ));
    }
    fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Reads a `t,x,y,u,v` flow CSV; parse errors name the offending line.
pub fn read_flow_csv(path: &Path) -> Result<Vec<FlowVector>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "t,x,y,u,v" => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "expected header `t,x,y,u,v`".into(),
            })
        }
    }
    let mut flow = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected 5 fields, found {}", fields.len()),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim().parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("invalid number `{}`", s.trim()),
            })
        };
        flow.push(FlowVector::new(
            parse(fields[0])?,
            Point2::new(parse(fields[1])?, parse(fields[2])?),
            parse(fields[3])?,
            parse(fields[4])?,
        ));
    }
    Ok(flow)
}

/// Writes an ego-motion trajectory as `t,U,V,W,A,B,C` CSV.
pub fn write_trajectory_csv(path: &Path, trajectory: &[(f64, EgoMotion)]) -> Result<()> {
    let mut out = String::from("t,U,V,W,A,B,C\n");
    for (t, e) in trajectory {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt12(*t),
            fmt12(e.lateral),
            fmt12(e.vertical),
            fmt12(e.forward),
            fmt12(e.pitch_rate),
            fmt12(e.yaw_rate),
            fmt12(e.roll_rate)
        ));
    }
    fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn read_trajectory_csv(path: &Path) -> Result<Vec<(f64, EgoMotion)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "t,U,V,W,A,B,C" => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "expected header `t,U,V,W,A,B,C`".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected 7 fields, found {}", fields.len()),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim().parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("invalid number `{}`", s.trim()),
            })
        };
        rows.push((
            parse(fields[0])?,
            EgoMotion {
                lateral: parse(fields[1])?,
                vertical: parse(fields[2])?,
                forward: parse(fields[3])?,
                pitch_rate: parse(fields[4])?,
                yaw_rate: parse(fields[5])?,
                roll_rate: parse(fields[6])?,
            },
        ));
    }
    Ok(rows)
}

/// Per-trial results CSV. Failed trials are skipped.
pub fn write_results_csv(path: &Path, results: &[TrialResult]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "trial_id",
        "method",
        "angular_error_deg",
        "time_per_kvec_s",
        "score",
        "bounded",
    ])?;
    for r in results.iter().filter(|r| r.error.is_none()) {
        w.write_record([
            r.trial_id.to_string(),
            r.method.to_string(),
            fmt12(r.angular_error_deg),
            fmt12(r.time_per_kvec_s),
            r.score.to_string(),
            r.bounded.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(())
}

/// Aggregate summary CSV, one row per method.
pub fn write_summary_csv(path: &Path, summary: &BenchmarkSummary) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "method",
        "mean_err_deg",
        "std_err_deg",
        "mean_time_s",
        "std_time_s",
        "cv_pct",
        "n",
    ])?;
    for row in &summary.rows {
        w.write_record([
            row.method.to_string(),
            fmt12(row.mean_err_deg),
            fmt12(row.std_err_deg),
            fmt12(row.mean_time_s),
            fmt12(row.std_time_s),
            fmt12(row.cv_pct),
            row.n.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flow_csv_round_trip_to_1e9() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("flow.csv");
        let flow: Vec<FlowVector> = (0..50)
            .map(|i| {
                let x = i as f64 * 1.2345678901;
                FlowVector::new(
                    0.01 * i as f64,
                    Point2::new(x, 180.0 - x * 0.7),
                    (x * 0.31).sin() * 17.3,
                    (x * 0.13).cos() * -9.1,
                )
            })
            .collect();
        write_flow_csv(&path, &flow).unwrap();
        let back = read_flow_csv(&path).unwrap();
        assert_eq!(back.len(), flow.len());
        for (a, b) in flow.iter().zip(&back) {
            assert!((a.t - b.t).abs() < 1e-9);
            assert!((a.pos.x - b.pos.x).abs() < 1e-9);
            assert!((a.pos.y - b.pos.y).abs() < 1e-9);
            assert!((a.u - b.u).abs() < 1e-9);
            assert!((a.v - b.v).abs() < 1e-9);
        }
    }

    #[test]
    fn flow_csv_malformed_row_names_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "t,x,y,u,v\n0,1,2,3,4\n0,oops,2,3,4\n").unwrap();
        match read_flow_csv(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn camera_json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cam.json");
        let cam = CameraModel::default_dvs();
        write_camera_json(&path, &cam).unwrap();
        assert_eq!(read_camera_json(&path).unwrap(), cam);
    }

    #[test]
    fn trajectory_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traj.csv");
        let rows = vec![
            (0.0, EgoMotion::translation(0.1, -0.2, 1.0)),
            (
                0.5,
                EgoMotion {
                    lateral: 0.3,
                    vertical: 0.0,
                    forward: 1.5,
                    pitch_rate: 0.01,
                    yaw_rate: -0.02,
                    roll_rate: 0.3,
                },
            ),
        ];
        write_trajectory_csv(&path, &rows).unwrap();
        let back = read_trajectory_csv(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert!((back[1].1.roll_rate - 0.3).abs() < 1e-9);
    }
}
