//! Plain-text exports. Edges one per line as `i j` with `i < j`; vertex
//! maps and generator lists in hex.

use std::io::Write;

use crate::error::{Error, Result};
use crate::gf2m::FieldCtx;
use crate::graphs::{GraphHandle, VertexCodec};
use crate::group::GElem;

pub fn write_edge_list<W: Write>(w: &mut W, g: &GraphHandle) -> Result<()> {
    let csr = g.csr().ok_or(Error::CapExceeded {
        what: "edge-list export (explicit graphs only)",
        q: g.q,
        cap: crate::graphs::EXPLICIT_CAP,
    })?;
    writeln!(w, "# moore3 q={} order={} degree={}", g.q, g.order, g.max_degree())?;
    for i in 0..g.order as u32 {
        for &j in csr.list(i).iter().filter(|&&j| j > i) {
            writeln!(w, "{i} {j}")?;
        }
    }
    Ok(())
}

/// Index followed by the vertex in hex: `r a b` for group vertices,
/// four coordinates for points.
pub fn write_vertex_map<W: Write>(w: &mut W, g: &GraphHandle) -> Result<()> {
    writeln!(w, "# moore3 q={} order={} vertex map", g.q, g.order)?;
    for i in 0..g.order as u32 {
        match &g.codec {
            VertexCodec::Group { .. } => {
                let [r, a, b] = g.codec.elem(i).unwrap().hex_triple();
                writeln!(w, "{i} {r} {a} {b}")?;
            }
            _ => {
                let c = g.codec.point(i).unwrap().coords();
                writeln!(w, "{i} {:x} {:x} {:x} {:x}", c[0], c[1], c[2], c[3])?;
            }
        }
    }
    Ok(())
}

pub fn write_generators<W: Write>(w: &mut W, q: u32, gens: &[GElem]) -> Result<()> {
    writeln!(w, "# moore3 q={q} generators={}", gens.len())?;
    for g in gens {
        let [r, a, b] = g.hex_triple();
        writeln!(w, "{r} {a} {b}")?;
    }
    Ok(())
}

/// Inverse of [`write_generators`]; `#` lines are skipped.
pub fn read_generators(ctx: &FieldCtx, text: &str) -> Result<Vec<GElem>> {
    let bad = |line: &str| Error::InvalidGenerators(format!("cannot parse line {line:?}"));
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|line| {
            let v: Vec<u32> = line
                .split_whitespace()
                .map(|t| u32::from_str_radix(t, 16))
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad(line))?;
            match v[..] {
                [r, a, b] => GElem::from_bits(ctx, r, a, b),
                _ => Err(bad(line)),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_aq, build_cayley, gen_s, GraphMode};
    use crate::polarity::PolarityCtx;

    #[test]
    fn edge_list_format() {
        let ctx = FieldCtx::new(3).unwrap();
        let g = build_cayley(&ctx, &gen_s(&ctx), GraphMode::Explicit, "C(G,S)").unwrap();
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# moore3 q=8 order=448 degree=7"));
        let edges: Vec<(u32, u32)> = lines
            .map(|l| {
                let mut it = l.split(' ').map(|t| t.parse().unwrap());
                (it.next().unwrap(), it.next().unwrap())
            })
            .collect();
        assert_eq!(edges.len(), 448 * 7 / 2);
        assert!(edges.iter().all(|(i, j)| i < j));
        assert!(edges.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn implicit_graphs_have_no_edge_list() {
        let ctx = FieldCtx::new(3).unwrap();
        let g = build_cayley(&ctx, &gen_s(&ctx), GraphMode::Implicit, "x").unwrap();
        assert!(write_edge_list(&mut Vec::new(), &g).is_err());
    }

    #[test]
    fn vertex_maps() {
        let ctx = FieldCtx::new(3).unwrap();
        let g = build_cayley(&ctx, &gen_s(&ctx), GraphMode::Implicit, "x").unwrap();
        let mut buf = Vec::new();
        write_vertex_map(&mut buf, &g).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1), Some("0 1 0 0"));
        assert_eq!(text.lines().count(), 449);

        let a = build_aq(&PolarityCtx::new(ctx)).unwrap();
        let mut buf = Vec::new();
        write_vertex_map(&mut buf, &a).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 586);
    }

    #[test]
    fn generators_round_trip() {
        let ctx = FieldCtx::new(5).unwrap();
        let s = gen_s(&ctx);
        let mut buf = Vec::new();
        write_generators(&mut buf, 32, &s).unwrap();
        let back = read_generators(&ctx, std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(read_generators(&ctx, "1 2").is_err());
        assert!(read_generators(&ctx, "0 0 0").is_err());
        assert!(read_generators(&ctx, "1 zz 0").is_err());
    }
}
