//! The `kissing` command line: every subcommand reads documents, calls the
//! library and prints one JSON report on standard output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use kissing_core::angle::{lamination_of, question_mark, Angle, Lamination, LaminationDocument, DEFAULT_QMARK_DEPTH};
use kissing_core::antirational::{
    julia_render, platonic_map, verify_dictionary_seeded, MapDocument, Window, DEFAULT_SEED, PLATONIC_NAMES,
};
use kissing_core::graph::HAMILTONIAN_CAP;
use kissing_core::group::{KissingGroup, Tile, DEFAULT_DISK_CAP};
use kissing_core::mating::{detect_obstruction, mate_graphs, shared_matings_capped, Dedup};
use kissing_core::packing::{solve_packing, verify_contact, CirclePacking, PackingDocument};
use kissing_core::{
    AngleError, AntiRationalMap, Error, GraphError, GroupError, MapError, MatingError, PackingError, PlaneGraph,
    SpherePoint,
};

pub mod dictionary;
pub mod json;
pub mod render;

pub use json::{to_json, to_value};

use render::{palette, Item, Scene, Shape};

#[derive(Debug, Parser)]
#[command(name = "kissing", version, about = "Plane graphs, kissing reflection groups and anti-rational maps")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Worker threads for rendering and sweeps (0 picks all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Seed for the root finder restarts.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Largest number of disks held at once.
    #[arg(long, global = true, default_value_t = DEFAULT_DISK_CAP)]
    pub cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Mateable,
    Obstructed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classification of a plane graph.
    GraphInfo { graph: PathBuf },
    /// Solve the circle packing of a graph.
    Pack {
        graph: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Approximate the limit set by small disks.
    Limitset {
        packing: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Word length of the side tiles drawn under the disks.
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        png: Option<PathBuf>,
        #[arg(long, default_value_t = 2048)]
        res: usize,
    },
    /// Nielsen itinerary of a point.
    Nielsen {
        packing: PathBuf,
        /// `x,y`
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 32)]
        steps: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Lamination of a marked outerplanar graph.
    Lamination { graph: PathBuf },
    /// Question-mark map at an angle.
    Qmark {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        theta: String,
        #[arg(long, default_value_t = DEFAULT_QMARK_DEPTH)]
        depth: usize,
    },
    /// Basins of a critically fixed anti-rational map.
    Julia {
        /// Built-in name or a coefficient document.
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 1024)]
        res: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        /// `xmin,xmax,ymin,ymax`
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Critical and fixed points of a map, checked against a graph.
    VerifyMap {
        #[arg(long)]
        map: String,
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Glue two marked outerplanar graphs.
    Mate {
        #[arg(long)]
        plus: PathBuf,
        #[arg(long)]
        minus: PathBuf,
        /// Without it every offset is reported.
        #[arg(long)]
        offset: Option<usize>,
        #[arg(long, value_enum, default_value_t = Expect::Mateable)]
        expect: Expect,
    },
    /// Split a graph along its Hamiltonian cycles.
    Unmate {
        graph: PathBuf,
        /// One entry per cycle instead of per isomorphism class.
        #[arg(long)]
        all: bool,
    },
    /// Ray-class obstruction of two laminations.
    Obstruct {
        #[arg(long)]
        lp: PathBuf,
        #[arg(long)]
        lq: PathBuf,
        #[arg(long, value_enum, default_value_t = Expect::Mateable)]
        expect: Expect,
    },
    /// Graph, group and map side by side.
    Dictionary {
        graph: PathBuf,
        #[arg(long)]
        map: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

/// A failed invocation and its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Graph(_) | Error::Angle(_) | Error::Document(_) | Error::Io(_) => 2,
            Error::Packing(PackingError::Graph(_) | PackingError::Mismatch(_) | PackingError::NotPolyhedral) => 2,
            Error::Group(GroupError::Graph(_) | GroupError::OutsideDomain | GroupError::BadGenerator { .. }) => 2,
            Error::Map(MapError::Invalid(_) | MapError::UnknownMap(_) | MapError::CommonRoot) => 2,
            Error::Mating(MatingError::Graph(_) | MatingError::Angle(_) | MatingError::DegreeMismatch(..)) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

macro_rules! from_core {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        }
    )*};
}
from_core!(GraphError, PackingError, GroupError, AngleError, MapError, MatingError);

/// Output of a subcommand: the report and whether it is a PASS verdict.
pub struct Report {
    pub json: String,
    pub pass: bool,
}

impl Report {
    fn ok<T: Serialize + ?Sized>(x: &T) -> Self {
        Self { json: to_json(x), pass: true }
    }

    fn verdict<T: Serialize + ?Sized>(x: &T, pass: bool) -> Self {
        Self { json: to_json(x), pass }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

pub fn load_graph(path: &Path) -> Result<PlaneGraph, Failure> {
    let doc = parse(path)?;
    PlaneGraph::from_document(&doc).map_err(|e| input(format!("{}: {e}", path.display())))
}

pub fn load_packing(path: &Path, tol: f64) -> Result<CirclePacking, Failure> {
    let doc: PackingDocument = parse(path)?;
    CirclePacking::from_document(&doc, tol).map_err(|e| input(format!("{}: {e}", path.display())))
}

pub fn load_lamination(path: &Path) -> Result<Lamination, Failure> {
    let doc: LaminationDocument = parse(path)?;
    Lamination::from_document(&doc).map_err(|e| input(format!("{}: {e}", path.display())))
}

/// A built-in name or the path of a coefficient document.
pub fn load_map(source: &str) -> Result<AntiRationalMap, Failure> {
    if PLATONIC_NAMES.contains(&source) {
        return Ok(platonic_map(source)?);
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(input(format!(
            "unknown map {source:?}: expected one of {} or a coefficient file",
            PLATONIC_NAMES.join(", ")
        )));
    }
    let doc: MapDocument = parse(path)?;
    Ok(AntiRationalMap::from_document(&doc)?)
}

fn parse_floats(s: &str, n: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| input(format!("{what} {s:?}: {e}")))?;
    if v.len() != n || v.iter().any(|x| !x.is_finite()) {
        return Err(input(format!("{what} {s:?}: expected {n} comma-separated numbers")));
    }
    Ok(v)
}

fn positive(x: f64, what: &str) -> Result<(), Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(input(format!("{what} must be positive, got {x}")))
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| input(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct GraphInfo {
    #[serde(flatten)]
    classification: dictionary::Classification,
    outerplanar_face: Option<usize>,
    face_degrees: Vec<usize>,
    hamiltonian_cycles: Option<Vec<Vec<usize>>>,
}

fn graph_info(path: &Path) -> Result<Report, Failure> {
    let g = load_graph(path)?;
    let mut face_degrees: Vec<usize> = g.faces().iter().map(|f| f.len()).collect();
    face_degrees.sort_unstable();
    Ok(Report::ok(&GraphInfo {
        classification: dictionary::Classification::of(&g, HAMILTONIAN_CAP),
        outerplanar_face: g.outerplanar_face(),
        face_degrees,
        hamiltonian_cycles: g.hamiltonian_cycles().ok(),
    }))
}

fn packing_scene(p: &CirclePacking) -> Scene {
    let disks: Vec<(f64, f64, f64)> = p
        .circles
        .iter()
        .map(|c| (c.center().re, c.center().im, c.radius()))
        .collect();
    let mut scene = Scene::around(disks.iter().copied());
    for (j, &(cx, cy, r)) in disks.iter().enumerate() {
        scene.items.push(Item {
            shape: Shape::Disk { cx, cy, r },
            fill: palette(j),
            stroke: Some([0, 0, 0]),
        });
    }
    scene
}

fn pack(path: &Path, tol: f64, out: Option<&Path>, svg: Option<&Path>) -> Result<Report, Failure> {
    positive(tol, "--tol")?;
    let g = load_graph(path)?;
    let p = solve_packing(&g, tol)?;
    let doc = p.to_document();
    if let Some(out) = out {
        write_file(out, to_json(&doc).as_bytes())?;
    }
    if let Some(svg) = svg {
        write_file(svg, packing_scene(&p).to_svg(1024).as_bytes())?;
    }
    let contact = verify_contact(&p);
    let pass = contact.pass;
    Ok(Report::verdict(&json!({ "packing": doc, "contact": contact }), pass))
}

fn tile_item(t: &Tile) -> Option<Item> {
    let poly = t.polyline()?;
    let outline: Vec<(f64, f64)> = poly.iter().map(|z| (z.re, z.im)).collect();
    let area: f64 = (0..outline.len())
        .map(|i| {
            let (p, q) = (outline[i], outline[(i + 1) % outline.len()]);
            p.0 * q.1 - q.0 * p.1
        })
        .sum();
    let o = if t.reversed { -1.0 } else { 1.0 };
    Some(Item {
        shape: Shape::Region {
            outline,
            complement: area * o <= 0.0,
        },
        fill: if t.side > 0 { [250, 210, 200] } else { [200, 215, 250] },
        stroke: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn limitset(
    path: &Path,
    eps: f64,
    tol: f64,
    level: usize,
    svg: Option<&Path>,
    png: Option<&Path>,
    res: usize,
    cap: usize,
) -> Result<Report, Failure> {
    positive(eps, "--eps")?;
    positive(tol, "--tol")?;
    if res == 0 {
        return Err(input("--res must be positive"));
    }
    let p = load_packing(path, tol)?;
    let group = KissingGroup::new(&p)?;
    let cover = group.limit_set_approx(eps, cap)?;
    let cycle = p.graph.hamiltonian_cycles().ok().and_then(|c| c.into_iter().next());
    if svg.is_some() || png.is_some() {
        let mut scene = Scene::around(
            p.circles
                .iter()
                .map(|c| (c.center().re, c.center().im, c.radius())),
        );
        if let Some(cycle) = &cycle {
            let (plus, minus) = group.omega_side_tiles(cycle, level)?;
            scene.items.extend(plus.iter().chain(&minus).filter_map(tile_item));
        }
        for (&(cx, cy, r), w) in cover.circles.iter().zip(&cover.words) {
            scene.items.push(Item {
                shape: Shape::Disk { cx, cy, r },
                fill: palette(w[0]),
                stroke: None,
            });
        }
        if let Some(svg) = svg {
            write_file(svg, scene.to_svg(1024).as_bytes())?;
        }
        if let Some(png) = png {
            scene
                .rasterize(res)
                .save_with_format(png, image::ImageFormat::Png)
                .map_err(|e| input(format!("{}: {e}", png.display())))?;
        }
    }
    let cusps = group.cusp_points();
    Ok(Report::ok(&json!({
        "generators": group.generators(),
        "eps": eps,
        "disk_count": cover.circles.len(),
        "deepest_level": cover.deepest_level,
        "side_cycle": cycle,
        "cusps": cusps,
    })))
}

fn nielsen(path: &Path, point: &str, steps: usize, tol: f64) -> Result<Report, Failure> {
    positive(tol, "--tol")?;
    let xy = parse_floats(point, 2, "--point")?;
    let p = load_packing(path, tol)?;
    let group = KissingGroup::new(&p)?;
    let z = SpherePoint::finite(num_complex::Complex64::new(xy[0], xy[1]));
    let (itinerary, escaped_at) = match group.nielsen_itinerary(z, steps) {
        Ok(it) => (it, None),
        Err(GroupError::EscapedToOmega(k)) => (group.nielsen_itinerary(z, k)?, Some(k)),
        Err(e) => return Err(e.into()),
    };
    Ok(Report::ok(&json!({
        "point": [xy[0], xy[1]],
        "steps": steps,
        "itinerary": itinerary,
        "escaped_at": escaped_at,
    })))
}

fn lamination(path: &Path) -> Result<Report, Failure> {
    let g = load_graph(path)?;
    Ok(Report::ok(&lamination_of(&g)?.to_document()))
}

fn qmark(d: usize, theta: &str, depth: usize) -> Result<Report, Failure> {
    let t: Angle = theta.parse().map_err(|e: AngleError| input(e.to_string()))?;
    let z = question_mark(&t, d, depth)?;
    Ok(Report::ok(&json!({ "d": d, "theta": t, "re": z.re, "im": z.im })))
}

fn julia(source: &str, res: usize, out: &Path, iters: usize, window: Option<&str>) -> Result<Report, Failure> {
    if res == 0 {
        return Err(input("--res must be positive"));
    }
    let map = load_map(source)?;
    let w = match window {
        Some(s) => {
            let v = parse_floats(s, 4, "--window")?;
            if !(v[0] < v[1] && v[2] < v[3]) {
                return Err(input("--window needs xmin < xmax and ymin < ymax"));
            }
            Window {
                xmin: v[0],
                xmax: v[1],
                ymin: v[2],
                ymax: v[3],
            }
        }
        None => Window::default(),
    };
    let height = ((res as f64) * (w.ymax - w.ymin) / (w.xmax - w.xmin)).round().max(1.0) as usize;
    let raster = julia_render(&map, &w, res, height, iters)?;
    raster
        .save_png(out)
        .map_err(|e| input(format!("{}: {e}", out.display())))?;
    Ok(Report::ok(&json!({
        "map": map.name,
        "width": res,
        "height": height,
        "window": w,
        "basins": raster.targets.len(),
        "distinct_basins": raster.distinct_basins(),
        "julia_fraction": raster.julia_fraction(),
    })))
}

fn verify_map(source: &str, graph: Option<&Path>, seed: u64) -> Result<Report, Failure> {
    let map = load_map(source)?;
    let critical = map.critical_points_seeded(seed)?;
    let fixed = map.fixed_points_seeded(seed)?;
    let g = match graph {
        Some(p) => Some(load_graph(p)?),
        None => None,
    };
    let report = g.as_ref().map(|g| verify_dictionary_seeded(g, &map, seed));
    let pass = critical.critically_fixed && report.as_ref().is_none_or(|r| r.pass);
    Ok(Report::verdict(
        &json!({
            "map": map.name,
            "degree": map.degree(),
            "k": critical.k,
            "total_fixed": fixed.total,
            "repelling": fixed.repelling,
            "attracting": fixed.attracting,
            "max_root_residual": fixed.max_root_residual,
            "critical": critical,
            "fixed": fixed,
            "dictionary": report,
            "pass": pass,
        }),
        pass,
    ))
}

fn mate(plus: &Path, minus: &Path, offset: Option<usize>, expect: Expect) -> Result<Report, Failure> {
    let p = load_graph(plus)?;
    let q = load_graph(minus)?;
    let want = expect == Expect::Mateable;
    match offset {
        Some(k) => {
            let v = mate_graphs(&p, &q, k)?;
            let pass = v.mateable == want;
            Ok(Report::verdict(&v, pass))
        }
        None => {
            let verdicts = (0..p.vertex_count())
                .map(|k| mate_graphs(&p, &q, k))
                .collect::<Result<Vec<_>, _>>()?;
            let any = verdicts.iter().any(|v| v.mateable);
            Ok(Report::verdict(&json!({ "mateable_offsets": verdicts.iter().filter(|v| v.mateable).map(|v| v.offset).collect::<Vec<_>>(), "verdicts": verdicts }), any == want))
        }
    }
}

fn unmate(path: &Path, all: bool) -> Result<Report, Failure> {
    let g = load_graph(path)?;
    let mode = if all { Dedup::Labeled } else { Dedup::Unordered };
    let list = shared_matings_capped(&g, mode, HAMILTONIAN_CAP)?;
    let docs: Vec<_> = list.iter().map(|u| u.to_document()).collect();
    Ok(Report::ok(&docs))
}

fn obstruct(lp: &Path, lq: &Path, expect: Expect) -> Result<Report, Failure> {
    let a = load_lamination(lp)?;
    let b = load_lamination(lq)?;
    let r = detect_obstruction(&a, &b)?;
    let pass = r.obstructed == (expect == Expect::Obstructed);
    Ok(Report::verdict(&r, pass))
}

fn dictionary_cmd(path: &Path, map: Option<&str>, tol: f64, g: &Global) -> Result<Report, Failure> {
    positive(tol, "--tol")?;
    let graph = load_graph(path)?;
    let map = map.map(load_map).transpose()?;
    let d = dictionary::dictionary(&graph, map.as_ref(), tol, g.seed, HAMILTONIAN_CAP, Some(g.cap))?;
    let pass = d.pass;
    Ok(Report::verdict(&d, pass))
}

/// Runs a parsed command and returns its report.
pub fn execute(cli: &Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    if g.cap == 0 {
        return Err(input("--cap must be positive"));
    }
    match &cli.command {
        Command::GraphInfo { graph } => graph_info(graph),
        Command::Pack { graph, tol, out, svg } => pack(graph, *tol, out.as_deref(), svg.as_deref()),
        Command::Limitset {
            packing,
            eps,
            tol,
            level,
            svg,
            png,
            res,
        } => limitset(packing, *eps, *tol, *level, svg.as_deref(), png.as_deref(), *res, g.cap),
        Command::Nielsen {
            packing,
            point,
            steps,
            tol,
        } => nielsen(packing, point, *steps, *tol),
        Command::Lamination { graph } => lamination(graph),
        Command::Qmark { d, theta, depth } => qmark(*d, theta, *depth),
        Command::Julia {
            map,
            res,
            out,
            iters,
            window,
        } => julia(map, *res, out, *iters, window.as_deref()),
        Command::VerifyMap { map, graph } => verify_map(map, graph.as_deref(), g.seed),
        Command::Mate {
            plus,
            minus,
            offset,
            expect,
        } => mate(plus, minus, *offset, *expect),
        Command::Unmate { graph, all } => unmate(graph, *all),
        Command::Obstruct { lp, lq, expect } => obstruct(lp, lq, *expect),
        Command::Dictionary { graph, map, tol } => dictionary_cmd(graph, map.as_deref(), *tol, g),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code: 0 on success, 1 on a FAIL verdict, 2 on bad input.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "kissing: {e}");
            return 2;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(r) => {
            let _ = stdout.write_all(r.json.as_bytes());
            if r.pass {
                0
            } else {
                let _ = writeln!(stderr, "kissing: FAIL");
                1
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "kissing: {}", f.message);
            f.code
        }
    }
}
