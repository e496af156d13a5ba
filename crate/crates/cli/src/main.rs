use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use geochrom::catalog::{self, CatalogDir, CatalogSource, OnDemandCatalogs, DEFAULT_MAX_GRID, MAX_CATALOG_N};
use geochrom::generators::{Family, FamilySpec, Figure};
use geochrom::graph::GraphJson;
use geochrom::lift::LiftError;
use geochrom::obstructions::{geochromatic_lower_bound_with_cap, DEFAULT_PATH_CAP};
use geochrom::{
    chromatic_number, find_noncollapsing_hom, geochromatic_number, is_geometric_hom, is_graph_hom, lift_dist2,
    lift_independent, lift_independent_noncollapsing, lift_small_chi, pseudo_geochromatic_number, Coloring,
    CrossingView, Geochromatic, GeometricGraph, VertexMap,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "geochrom", version, about = "Exact geochromatic numbers of geometric graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Chromatic number with a witness colouring.
    Chi { graph: PathBuf },
    /// Geochromatic number with the target drawing and map.
    X {
        graph: PathBuf,
        #[arg(long, default_value_t = MAX_CATALOG_N)]
        max_n: usize,
        /// Directory holding `k<n>.catalog.json` files; without it, catalogs up to K6 are enumerated on the fly and K7 is bundled.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Pseudo-geochromatic number with a witness colouring.
    Px { graph: PathBuf },
    /// Lift a proper colouring into a map onto a convex clique.
    Lift {
        #[arg(long, value_enum)]
        method: MethodArg,
        graph: PathBuf,
    },
    /// Check a map between two drawings.
    Verify { graph: PathBuf, target: PathBuf, map: PathBuf },
    /// Bounds derived from forced-distinct vertex pairs.
    Bound {
        #[command(subcommand)]
        kind: BoundKind,
    },
    /// Build a named family member or drawing.
    Gen {
        /// star, separation, convex, random, or a figure name such as figure6
        family: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Vertex count of a random graph.
        #[arg(long, default_value_t = 10)]
        vertices: usize,
        /// Edge probability of a random graph.
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        /// Minimum crossing distance of a random graph (0, 1 or 2).
        #[arg(long, default_value_t = 0)]
        min_dist: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where to write the bundled map or colouring, if the family has one.
        #[arg(long)]
        map_out: Option<PathBuf>,
    },
    /// Enumerate the realizable crossing structures of Kₙ.
    Catalog {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value_t = 3)]
        grid_start: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_GRID)]
        max_grid: usize,
    },
    /// Draw a graph as SVG.
    Render {
        graph: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum BoundKind {
    Lower {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PATH_CAP)]
        path_cap: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Dist2,
    Indep2n,
    Indep3n,
    Smallchi,
}

/// A failed command: exit status and the JSON written to stderr.
struct Failure {
    code: u8,
    body: Value,
}

impl Failure {
    fn invalid(kind: &str, message: impl ToString) -> Self {
        Failure { code: 2, body: json!({"error": kind, "message": message.to_string()}) }
    }

    fn negative(body: Value) -> Self {
        Failure { code: 1, body }
    }
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let body = json!({"error": "usage", "message": e.to_string().trim()});
            eprintln!("{body}");
            return ExitCode::from(2);
        }
        Err(e) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.command) {
        Ok(Value::Null) => ExitCode::SUCCESS,
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure { code, body }) => {
            // negative results are still results: print them, and echo on stderr
            if code == 1 {
                println!("{body}");
            }
            eprintln!("{body}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Chi { graph } => {
            let g = load_graph(&graph)?;
            let (chi, coloring) = chromatic_number(g.graph());
            Ok(json!({"chi": chi, "coloring": coloring.colors()}))
        }
        Command::X { graph, max_n, catalog } => x_command(&graph, max_n, catalog),
        Command::Px { graph } => {
            let g = load_graph(&graph)?;
            let (px, coloring) = pseudo_geochromatic_number(&g);
            Ok(json!({"px": px, "coloring": coloring.colors()}))
        }
        Command::Lift { method, graph } => lift_command(method, &graph),
        Command::Verify { graph, target, map } => verify_command(&graph, &target, &map),
        Command::Bound { kind: BoundKind::Lower { graph, path_cap } } => {
            let g = load_graph(&graph)?;
            let (bound, pairs) = geochromatic_lower_bound_with_cap(&g, path_cap);
            let listed: Vec<Value> = pairs
                .pairs()
                .map(|(e, rules)| {
                    let rules: Vec<String> = rules.iter().map(|r| r.to_string()).collect();
                    json!({"pair": [e.lo(), e.hi()], "rules": rules})
                })
                .collect();
            Ok(json!({"lower_bound": bound, "path_cap": path_cap, "pairs": listed}))
        }
        Command::Gen { family, k, n, seed, vertices, p, min_dist, output, map_out } => {
            gen_command(&family, k, n, seed, vertices, p, min_dist, output, map_out)
        }
        Command::Catalog { n, out, grid_start, max_grid } => catalog_command(n, &out, grid_start, max_grid),
        Command::Render { graph, output } => {
            let g = load_graph(&graph)?;
            write_file(&output, &render_svg(&g))?;
            Ok(json!({"written": output.display().to_string()}))
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid("io", format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::invalid("io", format!("{}: {e}", path.display())))
}

fn parse_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read_file(path)?).map_err(|e| Failure::invalid("json", format!("{}: {e}", path.display())))
}

fn graph_from_value(value: Value, origin: &Path) -> Result<GeometricGraph, Failure> {
    let wire: GraphJson =
        serde_json::from_value(value).map_err(|e| Failure::invalid("graph", format!("{}: {e}", origin.display())))?;
    GeometricGraph::from_json_value(wire).map_err(|e| Failure::invalid("graph", format!("{}: {e}", origin.display())))
}

fn load_graph(path: &Path) -> Result<GeometricGraph, Failure> {
    graph_from_value(parse_json(path)?, path)
}

/// A target drawing: plain graph JSON, or the output of `x` (its `target` field).
fn load_target(path: &Path) -> Result<GeometricGraph, Failure> {
    let mut value = parse_json(path)?;
    if let Some(target) = value.get_mut("target") {
        let target = target.take();
        return graph_from_value(target, path);
    }
    graph_from_value(value, path)
}

/// A map: a bare array, or any object with a `map` array (outputs of `x`,
/// `lift` and `gen --map-out`).
fn load_map(path: &Path, target_size: usize) -> Result<VertexMap, Failure> {
    let value = parse_json(path)?;
    let array = match &value {
        Value::Array(_) => &value,
        Value::Object(obj) => obj.get("map").ok_or_else(|| Failure::invalid("map", "object without a map field"))?,
        _ => return Err(Failure::invalid("map", "expected an array or an object with a map field")),
    };
    let images: Vec<usize> = serde_json::from_value(array.clone())
        .map_err(|e| Failure::invalid("map", format!("{}: {e}", path.display())))?;
    VertexMap::new(target_size, images).map_err(|e| Failure::invalid("map", e))
}

fn x_command(graph: &Path, max_n: usize, catalog_dir: Option<PathBuf>) -> Outcome {
    let g = load_graph(graph)?;
    if max_n > MAX_CATALOG_N {
        return Err(Failure::invalid("x", format!("max-n {max_n} exceeds {MAX_CATALOG_N}")));
    }
    let source: Box<dyn CatalogSource> = match catalog_dir {
        Some(dir) => Box::new(CatalogDir::new(dir)),
        None => Box::new(OnDemandCatalogs::new(max_n)),
    };
    match geochromatic_number(&g, max_n, source.as_ref()) {
        Ok(Geochromatic::Resolved { n, target, target_witness, catalog_index, map }) => Ok(json!({
            "x": n,
            "catalog_index": catalog_index,
            "target_canonical": target.canonical_hex(),
            "target": target_witness.to_json_value(),
            "map": map.images(),
        })),
        Ok(Geochromatic::Unresolved { searched_to }) => {
            Err(Failure::negative(json!({"status": "unresolved", "searched_to": searched_to})))
        }
        Err(e) => Err(Failure::invalid("catalog", e)),
    }
}

fn lift_command(method: MethodArg, graph: &Path) -> Outcome {
    let g = load_graph(graph)?;
    let (chi, chi_coloring) = chromatic_number(g.graph());
    let report = match method {
        MethodArg::Dist2 => lift_dist2(&g, &chi_coloring),
        MethodArg::Indep3n => lift_independent(&g, &chi_coloring),
        MethodArg::Smallchi => lift_small_chi(&g, &chi_coloring),
        MethodArg::Indep2n => {
            let alpha: Option<Coloring> = (chi..=g.vertex_count().max(chi)).find_map(|n| find_noncollapsing_hom(&g, n));
            match alpha {
                Some(alpha) => lift_independent_noncollapsing(&g, &alpha),
                None => return Err(Failure::negative(json!({"status": "no non-collapsing colouring"}))),
            }
        }
    };
    match report {
        Ok(report) => serde_json::from_str(&report.to_json()).map_err(|e| Failure::invalid("internal", e)),
        Err(e @ LiftError::Internal(_)) => {
            Err(Failure { code: 1, body: json!({"error": "internal", "message": e.to_string()}) })
        }
        Err(e) => Err(Failure::invalid("precondition", e)),
    }
}

fn verify_command(graph: &Path, target: &Path, map: &Path) -> Outcome {
    let g = load_graph(graph)?;
    let h = load_target(target)?;
    let f = load_map(map, h.vertex_count())?;
    if f.source_size() != g.vertex_count() {
        return Err(Failure::invalid(
            "map",
            format!("map covers {} vertices, graph has {}", f.source_size(), g.vertex_count()),
        ));
    }
    let graph_hom = is_graph_hom(g.graph(), h.graph(), &f);
    let geometric_hom = is_geometric_hom(&g, &h, &f);
    let body = json!({"graph_hom": graph_hom, "geometric_hom": geometric_hom});
    if graph_hom && geometric_hom {
        Ok(body)
    } else {
        Err(Failure::negative(body))
    }
}

#[allow(clippy::too_many_arguments)]
fn gen_command(
    family: &str,
    k: Option<usize>,
    n: Option<usize>,
    seed: u64,
    vertices: usize,
    p: f64,
    min_dist: usize,
    output: Option<PathBuf>,
    map_out: Option<PathBuf>,
) -> Outcome {
    let need = |value: Option<usize>, flag: &str| {
        value.ok_or_else(|| Failure::invalid("usage", format!("{family} needs --{flag}")))
    };
    let spec = match family {
        "star" => FamilySpec { family: Family::StarCrossing, parameter: need(k, "k")?, seed },
        "separation" => FamilySpec { family: Family::Separation, parameter: need(n, "n")?, seed },
        "convex" => FamilySpec { family: Family::ConvexClique, parameter: need(n, "n")?, seed },
        "random" => FamilySpec {
            family: Family::Random { edge_probability: p, min_crossing_distance: min_dist },
            parameter: vertices,
            seed,
        },
        other => {
            let figure: Figure = other.parse().map_err(|e| Failure::invalid("family", e))?;
            FamilySpec { family: Family::Figure(figure), parameter: 1, seed }
        }
    };
    let generated = spec.generate().map_err(|e| Failure::invalid("generator", e))?;
    if let Some(path) = map_out {
        let witness = match (&generated.map, &generated.coloring) {
            (Some(map), _) => json!({"target_size": map.target_size(), "map": map.images()}),
            (None, Some(coloring)) => json!({"coloring": coloring.colors()}),
            (None, None) => return Err(Failure::invalid("usage", format!("{family} has no bundled witness"))),
        };
        write_file(&path, &witness.to_string())?;
    }
    let text = generated.graph.to_json();
    match output {
        Some(path) => {
            write_file(&path, &text)?;
            Ok(json!({"written": path.display().to_string()}))
        }
        None => serde_json::from_str(&text).map_err(|e| Failure::invalid("internal", e)),
    }
}

fn catalog_command(n: usize, out: &Path, grid_start: usize, max_grid: usize) -> Outcome {
    let cat = catalog::enumerate_with_limit(n, grid_start, max_grid).map_err(|e| Failure::invalid("catalog", e))?;
    fs::create_dir_all(out).map_err(|e| Failure::invalid("io", format!("{}: {e}", out.display())))?;
    let path = catalog::write_catalog(out, &cat).map_err(|e| Failure::invalid("io", e))?;
    let body = json!({
        "n": n,
        "count": cat.len(),
        "grid_bound": cat.grid_bound,
        "converged": cat.converged,
        "path": path.display().to_string(),
    });
    if cat.converged {
        Ok(body)
    } else {
        Err(Failure::negative(body))
    }
}

/// Vertices as circles, edges as lines, crossing points as small red marks.
fn render_svg(g: &GeometricGraph) -> String {
    let pos: Vec<(f64, f64)> = g.positions().iter().map(|p| (p.x as f64, p.y as f64)).collect();
    let (mut min_x, mut max_x, mut min_y, mut max_y) = (0.0f64, 1.0f64, 0.0f64, 1.0f64);
    if let Some(&(x, y)) = pos.first() {
        (min_x, max_x, min_y, max_y) = (x, x, y, y);
    }
    for &(x, y) in &pos {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let size = 600.0;
    let margin = 20.0;
    let span = (max_x - min_x).max(max_y - min_y).max(1.0);
    let scale = (size - 2.0 * margin) / span;
    // flip y so the drawing reads with y pointing up
    let map = |(x, y): (f64, f64)| (margin + (x - min_x) * scale, size - margin - (y - min_y) * scale);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    for e in g.edges() {
        let (x1, y1) = map(pos[e.lo()]);
        let (x2, y2) = map(pos[e.hi()]);
        let _ = writeln!(
            svg,
            r#"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black" stroke-width="1.5"/>"#
        );
    }
    for c in g.crossings() {
        let (a, b) = (pos[c.first.lo()], pos[c.first.hi()]);
        let (p, q) = (pos[c.second.lo()], pos[c.second.hi()]);
        let denom = (b.0 - a.0) * (q.1 - p.1) - (b.1 - a.1) * (q.0 - p.0);
        let t = ((p.0 - a.0) * (q.1 - p.1) - (p.1 - a.1) * (q.0 - p.0)) / denom;
        let (cx, cy) = map((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
        let _ = writeln!(svg, r#"  <circle cx="{cx:.2}" cy="{cy:.2}" r="3" fill="red"/>"#);
    }
    for (i, &p) in pos.iter().enumerate() {
        let (cx, cy) = map(p);
        let _ = writeln!(svg, r#"  <circle cx="{cx:.2}" cy="{cy:.2}" r="6" fill="white" stroke="black"/>"#);
        let _ = writeln!(
            svg,
            r#"  <text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{i}</text>"#,
            cx,
            cy - 9.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
