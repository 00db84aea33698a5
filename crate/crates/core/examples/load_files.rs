//! Reads the sample graph, stream and scenario files shipped in `data/`.
use std::path::Path;

use copytree::io::{load_graph, load_scenarios, load_stream};

fn main() -> copytree::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let g = load_graph(&dir.join("hexagon.json"))?;
    println!("{:?}", g.summary());
    println!("{:?}", load_stream(&dir.join("hexagon_groups.json"))?);
    let inst = g.map_instance(&load_scenarios(&dir.join("hexagon_scenarios.json"))?)?;
    println!("{} scenarios, kind {:?}", inst.m(), inst.kind());
    let zero = copytree::io::parse_graph(r#"{"n":3,"edges":[[0,1,0],[1,2,0.5]]}"#, "inline")?;
    println!("contracted to {} vertices, scale {}", zero.graph.n(), zero.scale);
    Ok(())
}
