//! H- to V-representation on a few shapes, including an unbounded one.

use masbound::geometry::{enumerate_vertices, lp_maximize, Polytope};

fn main() -> masbound::Result<()> {
    let mut cut_square = Polytope::from_box(&[-1.0, -1.0], &[1.0, 1.0])?;
    cut_square.push(vec![1.0, 1.0], 1.0)?;

    let cube = Polytope::from_box(&[-1.0; 3], &[1.0; 3])?;

    let mut octahedron = Polytope::new(3);
    for sx in [-1.0, 1.0] {
        for sy in [-1.0, 1.0] {
            for sz in [-1.0, 1.0] {
                octahedron.push(vec![sx, sy, sz], 1.0)?;
            }
        }
    }

    for (name, p) in [("cut square", &cut_square), ("cube", &cube), ("octahedron", &octahedron)] {
        let v = enumerate_vertices(p)?;
        println!("{name}: {} vertices", v.vertices().map_or(0, <[_]>::len));
        for x in v.vertices().unwrap_or_default() {
            println!("  {x:?}");
        }
    }

    let opt = lp_maximize(&[1.0, 2.0], &cut_square)?;
    println!("max x + 2y on the cut square: {:?} at {:?}", opt.optimum, opt.argmax);

    let mut wedge = Polytope::new(2);
    wedge.push(vec![-1.0, 0.0], 0.0)?;
    wedge.push(vec![0.0, -1.0], 0.0)?;
    println!("wedge: {:?}", enumerate_vertices(&wedge).unwrap_err());
    Ok(())
}
