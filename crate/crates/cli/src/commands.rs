use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use etorus::grids::simplex_count;
use etorus::{
    count_formula, enumerate_fe_m, enumerate_lambda_e_m, enumerate_weyl, even_subgroup,
    stabilizer_order_brute, Complex64, ETransform64, Family, GridTag, Lattice, RootSystemData,
    SimpleType, WeylElement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{Direction, TypeArgs, Which};
use crate::error::{CliError, CliResult};
use crate::format::{
    labeled_columns, read_table, write_table, Cell, Format, Header, Kind, LabeledFile, LabeledRow,
    Table,
};

/// Resolved family, rank, level and `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JobConfig {
    pub ty: SimpleType,
    pub level: Option<i64>,
    pub j: usize,
}

impl JobConfig {
    /// Builds the configuration from the command line, filling gaps from
    /// a file header when one is available.
    pub fn resolve(args: &TypeArgs, fallback: Option<&GridTag>) -> CliResult<Self> {
        let family = match (&args.family_pos, &args.family) {
            (Some(a), Some(b)) if !a.eq_ignore_ascii_case(b) => {
                return Err(CliError::Config(format!("family given twice: {a} and {b}")))
            }
            (Some(f), _) | (None, Some(f)) => Some(f.parse::<Family>().map_err(CliError::Config)?),
            (None, None) => fallback.map(|t| t.ty.family()),
        };
        let rank = match (args.rank_pos, args.rank) {
            (Some(a), Some(b)) if a != b => {
                return Err(CliError::Config(format!("rank given twice: {a} and {b}")))
            }
            (Some(r), _) | (None, Some(r)) => Some(r),
            (None, None) => fallback.map(|t| t.ty.rank() as i64),
        };
        let family =
            family.ok_or_else(|| CliError::Config("family is required (A, B, C or D)".into()))?;
        let rank = rank.ok_or_else(|| CliError::Config("rank is required".into()))?;
        let rank = usize::try_from(rank)
            .map_err(|_| CliError::Config(format!("rank must be positive, got {rank}")))?;
        let ty = SimpleType::new(family, rank).map_err(|e| CliError::Config(e.to_string()))?;
        let level = args.level.or(fallback.map(|t| t.level));
        if let Some(m) = level {
            if m < 1 {
                return Err(CliError::Config(format!("M must be at least 1, got {m}")));
            }
        }
        let j = args.j.or(fallback.map(|t| t.j)).unwrap_or(1);
        if j == 0 || j > rank {
            return Err(CliError::Config(format!(
                "j must lie in 1..={rank}, got {j}"
            )));
        }
        Ok(Self { ty, level, j })
    }

    pub fn tag(&self) -> CliResult<GridTag> {
        let level = self
            .level
            .ok_or_else(|| CliError::Config("M is required (-M/--M)".into()))?;
        Ok(GridTag {
            ty: self.ty,
            level,
            j: self.j,
        })
    }
}

fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).map_err(|e| CliError::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn emit(table: &Table, format: Format, path: Option<&Path>) -> CliResult<()> {
    let target = path
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("<stdout>"));
    let mut out = open_output(path)?;
    write_table(table, format, &mut out).map_err(|e| CliError::io(&target, e))?;
    out.flush().map_err(|e| CliError::io(&target, e))
}

fn read_labeled(path: &Path, format: Option<Format>, kind: Kind) -> CliResult<LabeledFile> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let raw = read_table(&text, Format::resolve(format, Some(path)), path)?;
    LabeledFile::from_raw(raw, kind, path)
}

/// Checks a parsed file against the canonical enumeration of `tr`.
fn check_against_grid(
    file: &LabeledFile,
    tr: &ETransform64,
    path: &Path,
) -> CliResult<Vec<Complex64>> {
    if file.header.tag != tr.tag() {
        return Err(CliError::Grid(format!(
            "{} was written for {}, but the job is {}",
            path.display(),
            file.header.tag,
            tr.tag()
        )));
    }
    let expected: Vec<(&[i64], etorus::Part, u64)> = match file.header.kind {
        Kind::Coefficients => tr
            .weights()
            .iter()
            .map(|w| (w.bary.coords.as_slice(), w.bary.part, w.h_dual))
            .collect(),
        _ => tr
            .points()
            .iter()
            .map(|p| (p.bary.coords.as_slice(), p.bary.part, p.eps))
            .collect(),
    };
    if file.rows.len() < expected.len() {
        return Err(CliError::Malformed {
            path: path.to_path_buf(),
            row: file.rows.len() + 1,
            msg: format!(
                "file ends after {} rows, expected {}",
                file.rows.len(),
                expected.len()
            ),
        });
    }
    if file.rows.len() > expected.len() {
        return Err(CliError::Malformed {
            path: path.to_path_buf(),
            row: expected.len() + 1,
            msg: format!(
                "unexpected extra rows: found {}, expected {}",
                file.rows.len(),
                expected.len()
            ),
        });
    }
    for (i, (row, (bary, part, weight))) in file.rows.iter().zip(&expected).enumerate() {
        if row.bary != *bary || row.side != *part {
            return Err(CliError::Grid(format!(
                "{} row {}: [{}] {} does not match canonical [{}] {}",
                path.display(),
                i + 1,
                join(&row.bary),
                row.side.label(),
                join(bary),
                part.label()
            )));
        }
        if row.weight != *weight {
            return Err(CliError::Grid(format!(
                "{} row {}: weight {} differs from the grid's {}",
                path.display(),
                i + 1,
                row.weight,
                weight
            )));
        }
    }
    Ok(file.rows.iter().map(|r| r.value).collect())
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

pub fn info(args: &TypeArgs, format: Option<Format>) -> CliResult<()> {
    let cfg = JobConfig::resolve(args, None)?;
    let rsd = RootSystemData::new(cfg.ty);
    let n = rsd.rank();
    let even = rsd.even_weyl_order();
    let grid = match cfg.level {
        Some(m) => Some((m, count_formula(cfg.ty, m)?)),
        None => None,
    };
    let rows: Vec<Vec<i64>> = (0..n).map(|i| rsd.cartan.row(i).to_vec()).collect();
    let mut out = io::stdout().lock();
    let res = if format == Some(Format::Json) {
        let mut doc = serde_json::json!({
            "type": cfg.ty.to_string(),
            "cartan": rows,
            "marks": rsd.marks,
            "dual_marks": rsd.dual_marks,
            "coxeter": rsd.coxeter,
            "center": rsd.center,
            "weyl_order": rsd.weyl_order(),
            "even_weyl_order": even,
        });
        if let Some((m, count)) = grid {
            doc["M"] = m.into();
            doc["grid_size"] = (count as u64).into();
        }
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&doc).expect("JSON value")
        )
    } else {
        let mut s = format!("type {}\ncartan matrix\n", cfg.ty);
        for r in &rows {
            s.push_str(&format!(
                "  {}\n",
                r.iter().map(|v| format!("{v:>3}")).collect::<String>()
            ));
        }
        s.push_str(&format!("marks {}\n", join(&rsd.marks)));
        s.push_str(&format!("dual marks {}\n", join(&rsd.dual_marks)));
        s.push_str(&format!("m = {}\n", rsd.coxeter));
        s.push_str(&format!("c = {}\n", rsd.center));
        s.push_str(&format!("|W| = {}\n", rsd.weyl_order()));
        s.push_str(&format!("|W^e| = {even}\n"));
        if let Some((m, count)) = grid {
            s.push_str(&format!("|F^e_M| = |Lambda^e_M| = {count} at M = {m}\n"));
        }
        out.write_all(s.as_bytes())
    };
    res.map_err(|e| CliError::io("<stdout>", e))
}

pub fn grid(
    which: Which,
    args: &TypeArgs,
    format: Option<Format>,
    output: Option<&Path>,
) -> CliResult<()> {
    let cfg = JobConfig::resolve(args, None)?;
    let tag = cfg.tag()?;
    let rsd = RootSystemData::new(cfg.ty);
    let n = rsd.rank();
    let (kind, coord_prefix, rows) = match which {
        Which::Points => {
            let rows = enumerate_fe_m(&rsd, tag.level, tag.j)?
                .into_iter()
                .map(|p| grid_row(&p.bary.coords, p.bary.part, p.eps, &p.coords))
                .collect();
            (Kind::Points, "y", rows)
        }
        Which::Weights => {
            let rows = enumerate_lambda_e_m(&rsd, tag.level, tag.j)?
                .into_iter()
                .map(|w| grid_row(&w.bary.coords, w.bary.part, w.h_dual, &w.coords))
                .collect();
            (Kind::Weights, "l", rows)
        }
    };
    let mut columns = labeled_columns(kind, n);
    columns.extend((1..=n).map(|i| format!("{coord_prefix}{i}")));
    let table = Table {
        header: Header::new(kind, tag),
        columns,
        rows,
    };
    emit(&table, Format::resolve(format, output), output)
}

fn grid_row(bary: &[i64], part: etorus::Part, weight: u64, coords: &[i64]) -> Vec<Cell> {
    let mut row: Vec<Cell> = bary.iter().map(|&s| Cell::Int(s)).collect();
    row.push(Cell::Text(part.label().into()));
    row.push(Cell::Int(weight as i64));
    row.extend(coords.iter().map(|&c| Cell::Int(c)));
    row
}

pub fn transform(
    direction: Direction,
    args: &TypeArgs,
    input: &Path,
    output: Option<&Path>,
    format: Option<Format>,
) -> CliResult<()> {
    let in_kind = match direction {
        Direction::Forward => Kind::Samples,
        Direction::Inverse => Kind::Coefficients,
    };
    let file = read_labeled(input, format, in_kind)?;
    let cfg = JobConfig::resolve(args, Some(&file.header.tag))?;
    let tag = cfg.tag()?;
    let tr = ETransform64::new(tag.ty, tag.level, tag.j)?;
    let values = check_against_grid(&file, &tr, input)?;
    let out_format = Format::resolve(format, output);
    match direction {
        Direction::Forward => {
            let samples = tr.samples(values)?;
            let cv = tr.forward(&samples)?;
            let report = tr.plancherel_check(&samples)?;
            let rows = tr
                .weights()
                .iter()
                .zip(&cv.values)
                .map(|(w, c)| LabeledRow {
                    bary: w.bary.coords.clone(),
                    side: w.bary.part,
                    weight: w.h_dual,
                    value: *c,
                })
                .collect();
            let out = LabeledFile {
                header: Header::new(Kind::Coefficients, tag),
                rows,
            };
            emit(&out.to_table(), out_format, output)?;
            eprintln!(
                "forward transform {tag}: {} coefficients, Plancherel lhs {:.12e} rhs {:.12e} reldev {:.3e}",
                tr.len(),
                report.lhs,
                report.rhs,
                report.reldev
            );
        }
        Direction::Inverse => {
            let cv = tr.coefficients(values)?;
            let samples = tr.inverse(&cv)?;
            let rows = tr
                .points()
                .iter()
                .zip(&samples.values)
                .map(|(p, v)| LabeledRow {
                    bary: p.bary.coords.clone(),
                    side: p.bary.part,
                    weight: p.eps,
                    value: *v,
                })
                .collect();
            let out = LabeledFile {
                header: Header::new(Kind::Samples, tag),
                rows,
            };
            emit(&out.to_table(), out_format, output)?;
            eprintln!("inverse transform {tag}: {} samples", tr.len());
        }
    }
    Ok(())
}

/// Real reflection `r_j` on coweight coordinates.
fn reflect(w: &WeylElement, y: &[f64]) -> Vec<f64> {
    let m = w.point_matrix();
    (0..y.len())
        .map(|r| (0..y.len()).map(|c| m[(r, c)] as f64 * y[c]).sum())
        .collect()
}

/// Mesh parameters and the coweight coordinates they map to. The unit
/// square (rank 2) or the interval `[0, 2]` (rank 1) covers `F`; the part
/// past the diagonal (past 1) is folded back and sent through `r_j`.
fn mesh_points(
    rsd: &RootSystemData,
    j: usize,
    resolution: usize,
) -> CliResult<Vec<(Vec<f64>, Vec<f64>)>> {
    let rj = WeylElement::simple_reflection(rsd, j)?;
    let m: Vec<f64> = rsd.marks.iter().map(|&v| v as f64).collect();
    let step = |k: usize| k as f64 / (resolution - 1) as f64;
    let mut out = Vec::new();
    match rsd.rank() {
        1 => {
            for k in 0..resolution {
                let t = 2.0 * step(k);
                let y = if t <= 1.0 {
                    vec![t / m[0]]
                } else {
                    reflect(&rj, &[(2.0 - t) / m[0]])
                };
                out.push((vec![t], y));
            }
        }
        2 => {
            for a in 0..resolution {
                for b in 0..resolution {
                    let (u, v) = (step(a), step(b));
                    let y = if u + v <= 1.0 {
                        vec![u / m[0], v / m[1]]
                    } else {
                        reflect(&rj, &[(1.0 - v) / m[0], (1.0 - u) / m[1]])
                    };
                    out.push((vec![u, v], y));
                }
            }
        }
        n => {
            return Err(CliError::Config(format!(
                "mesh output needs rank 1 or 2 (got {n}); pass --points with explicit coordinates"
            )))
        }
    }
    Ok(out)
}

fn read_point_list(path: &Path, rank: usize) -> CliResult<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let malformed = |row: usize, msg: String| CliError::Malformed {
        path: path.to_path_buf(),
        row,
        msg,
    };
    let width = reader
        .headers()
        .map_err(|e| malformed(0, e.to_string()))?
        .len();
    if width != rank {
        return Err(malformed(
            0,
            format!("expected {rank} coordinate columns, found {width}"),
        ));
    }
    reader
        .records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(|e| malformed(i + 1, e.to_string()))?;
            if rec.len() != rank {
                return Err(malformed(
                    i + 1,
                    format!("expected {rank} fields, found {}", rec.len()),
                ));
            }
            rec.iter()
                .map(|c| match c.trim().parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(malformed(i + 1, format!("bad coordinate '{c}'"))),
                })
                .collect()
        })
        .collect()
}

pub fn eval(
    args: &TypeArgs,
    input: &Path,
    output: Option<&Path>,
    resolution: usize,
    points: Option<&Path>,
    format: Option<Format>,
) -> CliResult<()> {
    let file = read_labeled(input, format, Kind::Coefficients)?;
    let cfg = JobConfig::resolve(args, Some(&file.header.tag))?;
    let tag = cfg.tag()?;
    let tr = ETransform64::new(tag.ty, tag.level, tag.j)?;
    let cv = tr.coefficients(check_against_grid(&file, &tr, input)?)?;
    let n = tag.ty.rank();
    let frame = tr.frame();

    let (kind, mut columns, params) = match points {
        Some(p) => {
            let list = read_point_list(p, n)?;
            (
                Kind::Evaluations,
                Vec::new(),
                list.into_iter()
                    .map(|y| (Vec::new(), y))
                    .collect::<Vec<_>>(),
            )
        }
        None => {
            if resolution < 2 {
                return Err(CliError::Config(format!(
                    "resolution must be at least 2, got {resolution}"
                )));
            }
            let names = ["u", "v"];
            let cols = names[..n.min(2)].iter().map(|s| s.to_string()).collect();
            (
                Kind::Mesh,
                cols,
                mesh_points(tr.root_system(), tag.j, resolution)?,
            )
        }
    };
    columns.extend((1..=n).map(|i| format!("y{i}")));
    columns.extend((1..=n).map(|i| format!("x{i}")));
    columns.push("value_re".into());
    columns.push("value_im".into());

    let mut rows = Vec::with_capacity(params.len());
    for (uv, y) in &params {
        let value = tr.interpolate_real(&cv, y)?;
        let x = frame.point_vector(y);
        let mut row: Vec<Cell> = uv.iter().map(|&v| Cell::Float(v)).collect();
        row.extend(y.iter().map(|&v| Cell::Float(v)));
        row.extend(x.iter().map(|&v| Cell::Float(v)));
        row.push(Cell::Float(value.re));
        row.push(Cell::Float(value.im));
        rows.push(row);
    }
    let mut header = Header::new(kind, tag);
    if kind == Kind::Mesh {
        header
            .extra
            .push(("resolution".into(), resolution.to_string()));
    }
    let table = Table {
        header,
        columns,
        rows,
    };
    emit(&table, Format::resolve(format, output), output)
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

pub fn verify(args: &TypeArgs, seed: u64, samples: usize) -> CliResult<()> {
    let cfg = JobConfig::resolve(args, None)?;
    let tag = cfg.tag()?;
    let (ty, level, j) = (tag.ty, tag.level, tag.j);
    let rsd = RootSystemData::new(ty);
    let n = rsd.rank();
    let mut checks = Vec::new();

    let points = enumerate_fe_m(&rsd, level, j)?;
    let weights = enumerate_lambda_e_m(&rsd, level, j)?;
    let formula = count_formula(ty, level)?;
    let mut detail = format!(
        "|F^e_M| = {}, |Lambda^e_M| = {}, formula {formula}",
        points.len(),
        weights.len()
    );
    let mut passed = points.len() as u128 == formula && weights.len() as u128 == formula;
    let m = rsd.coxeter;
    let base = simplex_count(&rsd.marks, level) as u128;
    let interior = match level.cmp(&m) {
        std::cmp::Ordering::Less => 0,
        std::cmp::Ordering::Equal => 1,
        std::cmp::Ordering::Greater => simplex_count(&rsd.marks, level - m) as u128,
    };
    passed &= base + interior == formula;
    detail.push_str(&format!(", |F_M| + interior = {base} + {interior}"));
    if ty.family() == Family::B {
        let c = count_formula(SimpleType::new(Family::C, n)?, level)?;
        passed &= c == formula;
        detail.push_str(&format!(", C{n} formula {c}"));
    }
    checks.push(Check {
        name: "count formula",
        passed,
        detail,
    });

    let eps_sum: u64 = points.iter().map(|p| p.eps).sum();
    let torus = rsd.center as u64 * (level as u64).pow(n as u32);
    checks.push(Check {
        name: "eps sum",
        passed: eps_sum == torus,
        detail: format!("sum eps = {eps_sum}, c M^n = {torus}"),
    });

    let even = even_subgroup(&enumerate_weyl(&rsd)?);
    let mut mismatches = 0usize;
    for p in &points {
        if stabilizer_order_brute(&p.coords, level, &even, &rsd, Lattice::Point) * p.eps
            != even.len() as u64
        {
            mismatches += 1;
        }
    }
    for w in &weights {
        if stabilizer_order_brute(&w.coords, level, &even, &rsd, Lattice::Weight) != w.h_dual {
            mismatches += 1;
        }
    }
    checks.push(Check {
        name: "stabilizers",
        passed: mismatches == 0,
        detail: format!(
            "{} orders compared, {mismatches} mismatches",
            points.len() + weights.len()
        ),
    });

    let tr = ETransform64::new(ty, level, j)?;
    let gram = tr.gram_matrix();
    checks.push(Check {
        name: "gram matrix",
        passed: gram.max_offdiag_scaled < 1e-9 && gram.max_diag_reldev < 1e-10,
        detail: format!(
            "diagonal scale {} h, max off-diagonal/scale {:.3e}, max diagonal rel dev {:.3e}",
            tr.norm_scale(),
            gram.max_offdiag_scaled,
            gram.max_diag_reldev
        ),
    });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_rt = 0.0f64;
    let mut worst_pl = 0.0f64;
    for _ in 0..samples {
        let values = (0..tr.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let f = tr.samples(values)?;
        let back = tr.inverse(&tr.forward(&f)?)?;
        let err = back
            .values
            .iter()
            .zip(&f.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst_rt = worst_rt.max(err);
        worst_pl = worst_pl.max(tr.plancherel_check(&f)?.reldev);
    }
    checks.push(Check {
        name: "round trip",
        passed: worst_rt < 1e-9,
        detail: format!("{samples} random vectors, max error {worst_rt:.3e}"),
    });
    checks.push(Check {
        name: "plancherel",
        passed: worst_pl < 1e-10,
        detail: format!("{samples} random vectors, max rel dev {worst_pl:.3e}"),
    });

    let mut out = io::stdout().lock();
    let mut report = format!("verify {tag} (seed {seed})\n");
    for c in &checks {
        report.push_str(&format!(
            "{} {}: {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    out.write_all(report.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))?;
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verify(failed.join(", ")))
    }
}
