//! On-disk formats: Profile/Field CSVs, JSON reports, and run directories.
//!
//! Everything numeric is written with 17 significant digits (`{:.16e}`),
//! which round-trips every finite f64 exactly; reruns with the same seeds
//! therefore produce bit-identical files. Formats:
//!
//! * Profile / Field CSV — one comment header
//!   `# L=<val> N=<val> c1=<val> c2=<val> k=<val> family=<id>`,
//!   a column header `x,u`, then one `x,u` row per grid sample. Plain
//!   fields (trajectory snapshots) use the same shape with `family=-1`.
//! * SpectrumReport — JSON, written verbatim from the struct.
//! * ContinuedFamily — Profile CSV plus a JSON sidecar
//!   `{delta, residual, newton_iters, source_family}`.
//! * Run directory — `meta.json`, `energies.csv` (`t,F,E1,velocity,mean`),
//!   and `snapshots/snap_<index>.csv` in Field CSV form.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::continuation::Continued;
use crate::error::{Error, Result};
use crate::evolution::{ClassifyTol, TrajectoryRecord};
use crate::phase_plane::Profile;
use crate::potential::PhaseParams;
use crate::spectral::{Field, SpectralGrid};

/// 17-significant-digit decimal form; round-trips f64 exactly.
pub fn fmt_full(x: f64) -> String {
    format!("{x:.16e}")
}

// ---------------------------------------------------------------------------
// Profile / Field CSV
// ---------------------------------------------------------------------------

fn csv_body(header: &str, field: &Field) -> String {
    let grid = field.grid();
    let mut out = String::with_capacity(48 * grid.n() + 64);
    out.push_str(header);
    out.push('\n');
    out.push_str("x,u\n");
    for (j, u) in field.values().iter().enumerate() {
        let _ = writeln!(out, "{},{}", fmt_full(grid.x(j)), fmt_full(*u));
    }
    out
}

/// Write a steady profile with its phase-plane provenance in the header.
pub fn write_profile(path: &Path, profile: &Profile) -> Result<()> {
    let header = format!(
        "# L={} N={} c1={} c2={} k={} family={}",
        fmt_full(profile.l()),
        profile.n(),
        fmt_full(profile.c.c1),
        fmt_full(profile.c.c2),
        profile.k,
        profile.family_id,
    );
    fs::write(path, csv_body(&header, &profile.field))?;
    Ok(())
}

/// Write a bare field (snapshot) in the shared CSV shape; `family=-1`
/// marks it as not a member of any steady family.
pub fn write_field(path: &Path, field: &Field) -> Result<()> {
    let header = format!(
        "# L={} N={} c1={} c2={} k=0 family=-1",
        fmt_full(field.grid().l()),
        field.grid().n(),
        fmt_full(0.0),
        fmt_full(0.0),
    );
    fs::write(path, csv_body(&header, field))?;
    Ok(())
}

struct CsvHeader {
    l: f64,
    n: usize,
    c1: f64,
    c2: f64,
    k: u32,
    family: i64,
}

fn parse_header(line: &str, path: &Path) -> Result<CsvHeader> {
    let bad = |msg: &str| Error::Parse(format!("{}: {msg}", path.display()));
    let rest = line
        .strip_prefix('#')
        .ok_or_else(|| bad("first line must be a '# key=val ...' header"))?;
    let mut l = None;
    let mut n = None;
    let mut c1 = None;
    let mut c2 = None;
    let mut k = None;
    let mut family = None;
    for tok in rest.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| bad(&format!("malformed header token {tok:?}")))?;
        let parse_f = || -> Result<f64> {
            val.parse().map_err(|_| bad(&format!("bad value for {key}: {val:?}")))
        };
        match key {
            "L" => l = Some(parse_f()?),
            "N" => {
                n = Some(val.parse::<usize>().map_err(|_| bad(&format!("bad N: {val:?}")))?)
            }
            "c1" => c1 = Some(parse_f()?),
            "c2" => c2 = Some(parse_f()?),
            "k" => k = Some(val.parse::<u32>().map_err(|_| bad(&format!("bad k: {val:?}")))?),
            "family" => {
                family =
                    Some(val.parse::<i64>().map_err(|_| bad(&format!("bad family: {val:?}")))?)
            }
            _ => return Err(bad(&format!("unknown header key {key:?}"))),
        }
    }
    Ok(CsvHeader {
        l: l.ok_or_else(|| bad("missing L"))?,
        n: n.ok_or_else(|| bad("missing N"))?,
        c1: c1.unwrap_or(0.0),
        c2: c2.unwrap_or(0.0),
        k: k.unwrap_or(0),
        family: family.unwrap_or(-1),
    })
}

fn read_csv_field(path: &Path) -> Result<(CsvHeader, Field)> {
    let bad = |msg: String| Error::Parse(format!("{}: {msg}", path.display()));
    let text = fs::read_to_string(path)?;
    let header_line = text
        .lines()
        .next()
        .ok_or_else(|| bad("empty file".into()))?;
    let header = parse_header(header_line, path)?;

    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(text.as_bytes());
    let mut values = Vec::with_capacity(header.n);
    let mut xs = Vec::with_capacity(header.n);
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(bad(format!("expected 2 columns, found {}", rec.len())));
        }
        let x: f64 =
            rec[0].parse().map_err(|_| bad(format!("bad x value {:?}", &rec[0])))?;
        let u: f64 =
            rec[1].parse().map_err(|_| bad(format!("bad u value {:?}", &rec[1])))?;
        xs.push(x);
        values.push(u);
    }
    if values.len() != header.n {
        return Err(bad(format!("{} rows for N = {}", values.len(), header.n)));
    }
    let grid = SpectralGrid::new(header.l, header.n)?;
    for (j, &x) in xs.iter().enumerate() {
        if (x - grid.x(j)).abs() > 1e-9 * header.l.max(1.0) {
            return Err(bad(format!(
                "row {j}: x = {x} is not the grid point {}",
                grid.x(j)
            )));
        }
    }
    let field = Field::from_values(grid, values)?;
    Ok((header, field))
}

/// Read a steady profile written by [`write_profile`].
pub fn read_profile(path: &Path) -> Result<Profile> {
    let (h, field) = read_csv_field(path)?;
    Ok(Profile {
        field,
        c: PhaseParams::new(h.c1, h.c2),
        k: h.k,
        family_id: h.family,
    })
}

/// Read a field (snapshot or profile) ignoring the provenance keys.
pub fn read_field(path: &Path) -> Result<Field> {
    Ok(read_csv_field(path)?.1)
}

// ---------------------------------------------------------------------------
// JSON documents
// ---------------------------------------------------------------------------

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Write a spectrum report as JSON.
pub fn write_spectrum(path: &Path, report: &crate::linearization::SpectrumReport) -> Result<()> {
    write_json(path, report)
}

/// Read a spectrum report back.
pub fn read_spectrum(path: &Path) -> Result<crate::linearization::SpectrumReport> {
    read_json(path)
}

// ---------------------------------------------------------------------------
// Continued families
// ---------------------------------------------------------------------------

/// Sidecar record stored next to a continued family's profile CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuedSidecar {
    pub delta: f64,
    pub residual: f64,
    pub newton_iters: usize,
    pub source_family: i64,
}

/// Write a continued family as `<base>.csv` + `<base>.json` and return
/// the two paths.
pub fn write_continued(base: &Path, cont: &Continued) -> Result<(PathBuf, PathBuf)> {
    let csv_path = base.with_extension("csv");
    let json_path = base.with_extension("json");
    write_profile(&csv_path, &cont.profile)?;
    let sidecar = ContinuedSidecar {
        delta: cont.delta,
        residual: cont.residual,
        newton_iters: cont.newton_iters,
        source_family: cont.profile.family_id,
    };
    write_json(&json_path, &sidecar)?;
    Ok((csv_path, json_path))
}

/// Read a continued family written by [`write_continued`]. The number of
/// continuation steps is not persisted and reads back as zero.
pub fn read_continued(base: &Path) -> Result<Continued> {
    let mut profile = read_profile(&base.with_extension("csv"))?;
    let sidecar: ContinuedSidecar = read_json(&base.with_extension("json"))?;
    profile.family_id = sidecar.source_family;
    Ok(Continued {
        profile,
        delta: sidecar.delta,
        residual: sidecar.residual,
        steps_taken: 0,
        newton_iters: sidecar.newton_iters,
    })
}

// ---------------------------------------------------------------------------
// Families index
// ---------------------------------------------------------------------------

/// One row of `families.json`: provenance of an enumerated family plus the
/// CSV file holding its representative profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyIndexEntry {
    pub family_id: i64,
    pub k: u32,
    pub c1: f64,
    pub c2: f64,
    pub l: f64,
    pub n: usize,
    pub residual: f64,
    pub file: String,
}

/// Write the `families.json` index.
pub fn write_families_index(path: &Path, entries: &[FamilyIndexEntry]) -> Result<()> {
    write_json(path, &entries)
}

/// Read a `families.json` index.
pub fn read_families_index(path: &Path) -> Result<Vec<FamilyIndexEntry>> {
    read_json(path)
}

// ---------------------------------------------------------------------------
// Run directories
// ---------------------------------------------------------------------------

/// Provenance of a single trajectory run, stored as `meta.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMeta {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub delta: f64,
    pub dt: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub seed: u64,
    pub tolerances: ClassifyTol,
}

/// Persist one trajectory as a run directory: `meta.json`, `energies.csv`,
/// and `snapshots/` with every recorded state.
pub fn write_run_dir(dir: &Path, meta: &RunMeta, rec: &TrajectoryRecord) -> Result<()> {
    let snaps = dir.join("snapshots");
    fs::create_dir_all(&snaps)?;
    write_json(&dir.join("meta.json"), meta)?;

    let mut energies = String::from("t,F,E1,velocity,mean\n");
    for i in 0..rec.times.len() {
        let _ = writeln!(
            energies,
            "{},{},{},{},{}",
            fmt_full(rec.times[i]),
            fmt_full(rec.f_values[i]),
            fmt_full(rec.e1_values[i]),
            fmt_full(rec.velocity[i]),
            fmt_full(rec.means[i]),
        );
    }
    fs::write(dir.join("energies.csv"), energies)?;

    for (i, snap) in rec.snapshots.iter().enumerate() {
        write_field(&snaps.join(format!("snap_{i:06}.csv")), snap)?;
    }
    Ok(())
}

/// Read `energies.csv` rows back as `(t, F, E1, velocity, mean)`.
pub fn read_energies(path: &Path) -> Result<Vec<[f64; 5]>> {
    let bad = |msg: String| Error::Parse(format!("{}: {msg}", path.display()));
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != 5 {
            return Err(bad(format!("expected 5 columns, found {}", rec.len())));
        }
        let mut row = [0.0; 5];
        for (slot, fieldval) in row.iter_mut().zip(rec.iter()) {
            *slot = fieldval
                .parse()
                .map_err(|_| bad(format!("bad numeric value {fieldval:?}")))?;
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_plane::reconstruct_profile;
    use tempfile::tempdir;

    fn l10_profile() -> Profile {
        reconstruct_profile(PhaseParams::new(0.0, -0.014149038607286), 10.0, 64).unwrap()
    }

    #[test]
    fn profile_csv_roundtrip_is_bit_exact() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let p = l10_profile();
        write_profile(&path, &p).unwrap();
        let q = read_profile(&path).unwrap();
        assert_eq!(q.n(), p.n());
        assert_eq!(q.k, p.k);
        assert_eq!(q.family_id, p.family_id);
        assert_eq!(q.c.c1.to_bits(), p.c.c1.to_bits());
        assert_eq!(q.c.c2.to_bits(), p.c.c2.to_bits());
        for (a, b) in p.field.values().iter().zip(q.field.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        // Coefficients go through one extra FFT; they agree to roundoff.
        for (a, b) in p.field.coeffs().iter().zip(q.field.coeffs()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn field_csv_roundtrip_is_bit_exact() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let f = l10_profile().field;
        write_field(&path, &f).unwrap();
        let g = read_field(&path).unwrap();
        for (a, b) in f.values().iter().zip(g.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn malformed_headers_are_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, "x,u\n0.0,0.0\n").unwrap();
        assert!(matches!(read_profile(&path), Err(Error::Parse(_))));
        fs::write(&path, "# L=10 N=4 c1=0 c2=0 k=0 family=0\nx,u\n0.0,0.0\n").unwrap();
        // row count does not match N
        assert!(matches!(read_profile(&path), Err(Error::Parse(_))));
    }

    #[test]
    fn continued_sidecar_roundtrip() {
        let dir = tempdir().unwrap();
        let base = dir.path().join("fam_1_delta_0.05");
        let cont = Continued {
            profile: l10_profile(),
            delta: 0.05,
            residual: 3.2e-13,
            steps_taken: 4,
            newton_iters: 9,
        };
        let (csv_path, json_path) = write_continued(&base, &cont).unwrap();
        assert!(csv_path.exists() && json_path.exists());
        let back = read_continued(&base).unwrap();
        assert_eq!(back.delta.to_bits(), cont.delta.to_bits());
        assert_eq!(back.residual.to_bits(), cont.residual.to_bits());
        assert_eq!(back.newton_iters, 9);
        assert_eq!(back.profile.family_id, cont.profile.family_id);
    }

    #[test]
    fn families_index_roundtrip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("families.json");
        let entries = vec![
            FamilyIndexEntry {
                family_id: 0,
                k: 0,
                c1: 0.0,
                c2: 0.0,
                l: 10.0,
                n: 64,
                residual: 0.0,
                file: "family_0.csv".into(),
            },
            FamilyIndexEntry {
                family_id: 1,
                k: 1,
                c1: 0.0,
                c2: -0.014149038607286,
                l: 10.0,
                n: 64,
                residual: 2.0e-12,
                file: "family_1.csv".into(),
            },
        ];
        write_families_index(&path, &entries).unwrap();
        let back = read_families_index(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].family_id, 1);
        assert_eq!(back[1].c2.to_bits(), entries[1].c2.to_bits());
    }

    #[test]
    fn run_dir_holds_meta_energies_and_snapshots() {
        let dir = tempdir().unwrap();
        let run = dir.path().join("run");
        let p = l10_profile();
        let rec = TrajectoryRecord {
            delta: 0.05,
            times: vec![0.0, 1.0],
            snapshots: vec![p.field.clone(), p.field.clone()],
            f_values: vec![1.5, 1.25],
            e1_values: vec![1.6, 1.35],
            velocity: vec![1e-3, 1e-5],
            means: vec![0.0, 0.0],
            mean_drift: 0.0,
        };
        let meta = RunMeta {
            l: 10.0,
            n: 64,
            delta: 0.05,
            dt: 1e-3,
            t_final: 1.0,
            seed: 7,
            tolerances: ClassifyTol::default(),
        };
        write_run_dir(&run, &meta, &rec).unwrap();

        let meta_back: RunMeta = read_json(&run.join("meta.json")).unwrap();
        assert_eq!(meta_back.seed, 7);
        assert_eq!(meta_back.l, 10.0);
        let meta_text = fs::read_to_string(run.join("meta.json")).unwrap();
        for key in ["\"L\"", "\"N\"", "\"T\"", "\"seed\"", "\"tolerances\""] {
            assert!(meta_text.contains(key), "meta.json lacks {key}");
        }

        let rows = read_energies(&run.join("energies.csv")).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1][0], 1.0);
        assert_eq!(rows[1][3], 1e-5);

        let snap = read_field(&run.join("snapshots/snap_000001.csv")).unwrap();
        for (a, b) in snap.values().iter().zip(p.field.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
