//! Line-oriented text dump of sample sets.
//!
//! ```text
//! # locrec pairwise n=6 family=ring r=1 theta=0.1 seed=7 m=12
//! 1 2 0
//! 1 6 1
//! ```
//!
//! Multi-linked sets use a `multilink` header carrying `p=` and `L=` (0 for
//! variable width) and one `H k v1..vk i1..ik` line per sample. Vertices are
//! 1-indexed, lines end in LF.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::sampling::{HyperSampleSet, ParitySample, SampleSet};
use crate::topology::Family;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleHeader {
    pub n: usize,
    pub family: Family,
    pub r: usize,
    pub seed: u64,
    pub m_target: f64,
    pub noise: HeaderNoise,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeaderNoise {
    Theta(f64),
    /// Single-vertex error rate and fixed width (0 when variable).
    Multilink { p: f64, width: usize },
}

impl SampleHeader {
    fn line(&self) -> String {
        match self.noise {
            HeaderNoise::Theta(theta) => format!(
                "# locrec pairwise n={} family={} r={} theta={} seed={} m={}\n",
                self.n, self.family, self.r, theta, self.seed, self.m_target
            ),
            HeaderNoise::Multilink { p, width } => format!(
                "# locrec multilink n={} family={} r={} p={} L={} seed={} m={}\n",
                self.n, self.family, self.r, p, width, self.seed, self.m_target
            ),
        }
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_header(text: &str) -> Result<SampleHeader> {
    let mut tokens = text.split_whitespace();
    if tokens.next() != Some("#") || tokens.next() != Some("locrec") {
        return Err(perr(1, "missing '# locrec' header"));
    }
    let kind = tokens.next().ok_or_else(|| perr(1, "missing sample kind"))?;
    let mut n = None;
    let mut family = None;
    let mut r = None;
    let mut seed = None;
    let mut m = None;
    let mut theta = None;
    let mut p = None;
    let mut width = None;
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| perr(1, format!("bad header field '{tok}'")))?;
        let bad = |_| perr(1, format!("bad value for {key}: '{value}'"));
        match key {
            "n" => n = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "family" => family = Some(value.parse::<Family>().map_err(|e| bad(e.to_string()))?),
            "r" => r = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "seed" => seed = Some(value.parse::<u64>().map_err(|e| bad(e.to_string()))?),
            "m" => m = Some(value.parse::<f64>().map_err(|e| bad(e.to_string()))?),
            "theta" => theta = Some(value.parse::<f64>().map_err(|e| bad(e.to_string()))?),
            "p" => p = Some(value.parse::<f64>().map_err(|e| bad(e.to_string()))?),
            "L" => width = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            _ => return Err(perr(1, format!("unknown header key '{key}'"))),
        }
    }
    let missing = |k: &str| perr(1, format!("header lacks '{k}'"));
    let noise = match kind {
        "pairwise" => HeaderNoise::Theta(theta.ok_or_else(|| missing("theta"))?),
        "multilink" => HeaderNoise::Multilink {
            p: p.ok_or_else(|| missing("p"))?,
            width: width.ok_or_else(|| missing("L"))?,
        },
        other => return Err(perr(1, format!("unknown sample kind '{other}'"))),
    };
    Ok(SampleHeader {
        n: n.ok_or_else(|| missing("n"))?,
        family: family.ok_or_else(|| missing("family"))?,
        r: r.ok_or_else(|| missing("r"))?,
        seed: seed.ok_or_else(|| missing("seed"))?,
        m_target: m.unwrap_or(f64::NAN),
        noise,
    })
}

pub fn write_pairwise<W: Write + ?Sized>(out: &mut W, header: &SampleHeader, set: &SampleSet) -> Result<()> {
    let mut buf = header.line();
    for s in set.samples() {
        writeln!(buf, "{} {} {}", s.u + 1, s.v + 1, s.value).expect("string write");
    }
    out.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn write_multilink<W: Write + ?Sized>(
    out: &mut W,
    header: &SampleHeader,
    set: &HyperSampleSet,
) -> Result<()> {
    let mut buf = header.line();
    for (vs, ys) in set.iter() {
        write!(buf, "H {}", vs.len()).expect("string write");
        for y in ys {
            write!(buf, " {y}").expect("string write");
        }
        for v in vs {
            write!(buf, " {}", v + 1).expect("string write");
        }
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())?;
    Ok(())
}

fn parse_vertex(tok: &str, n: usize, line: usize) -> Result<u32> {
    let v: usize = tok
        .parse()
        .map_err(|_| perr(line, format!("bad vertex '{tok}'")))?;
    if v == 0 || v > n {
        return Err(perr(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok((v - 1) as u32)
}

fn parse_bit(tok: &str, line: usize) -> Result<u8> {
    match tok {
        "0" => Ok(0),
        "1" => Ok(1),
        _ => Err(perr(line, format!("bad bit '{tok}'"))),
    }
}

pub fn read_pairwise<R: BufRead>(input: R) -> Result<(SampleHeader, SampleSet)> {
    let mut lines = input.lines();
    let first = lines.next().ok_or_else(|| perr(1, "empty input"))??;
    let header = parse_header(&first)?;
    let theta = match header.noise {
        HeaderNoise::Theta(t) => t,
        HeaderNoise::Multilink { .. } => return Err(perr(1, "expected a pairwise header")),
    };
    let mut samples = Vec::new();
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split(' ').collect();
        if toks.len() != 3 {
            return Err(perr(lineno, "expected 'i j v'"));
        }
        let a = parse_vertex(toks[0], header.n, lineno)?;
        let b = parse_vertex(toks[1], header.n, lineno)?;
        if a == b {
            return Err(perr(lineno, "self-loop"));
        }
        let y = parse_bit(toks[2], lineno)?;
        samples.push(ParitySample::new(a as usize, b as usize, y));
    }
    let mut set = SampleSet::new(header.n, samples, theta);
    set.m_target = header.m_target;
    Ok((header, set))
}

pub fn read_multilink<R: BufRead>(input: R) -> Result<(SampleHeader, HyperSampleSet)> {
    let mut lines = input.lines();
    let first = lines.next().ok_or_else(|| perr(1, "empty input"))??;
    let header = parse_header(&first)?;
    let p = match header.noise {
        HeaderNoise::Multilink { p, .. } => p,
        HeaderNoise::Theta(_) => return Err(perr(1, "expected a multilink header")),
    };
    let mut set = HyperSampleSet::empty(header.n, p);
    let mut vs = Vec::new();
    let mut ys = Vec::new();
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split(' ').collect();
        if toks.first() != Some(&"H") || toks.len() < 2 {
            return Err(perr(lineno, "expected 'H k ...'"));
        }
        let k: usize = toks[1]
            .parse()
            .map_err(|_| perr(lineno, format!("bad width '{}'", toks[1])))?;
        if toks.len() != 2 + 2 * k {
            return Err(perr(lineno, format!("expected {} fields", 2 + 2 * k)));
        }
        ys.clear();
        vs.clear();
        for t in &toks[2..2 + k] {
            ys.push(parse_bit(t, lineno)?);
        }
        for t in &toks[2 + k..] {
            vs.push(parse_vertex(t, header.n, lineno)?);
        }
        set.push(&vs, &ys);
    }
    set.m_target = header.m_target;
    Ok((header, set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{build_hyper_topology, HyperEdgePolicy};
    use crate::labeling::Labeling;
    use crate::sampling::{draw_hyper_samples, draw_samples};
    use crate::topology::build_topology;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_pairwise_text() {
        let set = SampleSet::new(
            6,
            vec![ParitySample::new(0, 1, 0), ParitySample::new(5, 0, 1)],
            0.1,
        );
        let header = SampleHeader {
            n: 6,
            family: Family::Ring,
            r: 1,
            seed: 7,
            m_target: 2.0,
            noise: HeaderNoise::Theta(0.1),
        };
        let mut out = Vec::new();
        write_pairwise(&mut out, &header, &set).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "# locrec pairwise n=6 family=ring r=1 theta=0.1 seed=7 m=2\n1 2 0\n1 6 1\n"
        );
    }

    #[test]
    fn exact_multilink_text() {
        let mut set = HyperSampleSet::empty(10, 0.01);
        set.push(&[2, 3, 4], &[1, 0, 1]);
        let header = SampleHeader {
            n: 10,
            family: Family::Ring,
            r: 3,
            seed: 1,
            m_target: 1.0,
            noise: HeaderNoise::Multilink { p: 0.01, width: 3 },
        };
        let mut out = Vec::new();
        write_multilink(&mut out, &header, &set).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "# locrec multilink n=10 family=ring r=3 p=0.01 L=3 seed=1 m=1\nH 3 1 0 1 3 4 5\n"
        );
        let (h2, s2) = read_multilink(text.as_bytes()).unwrap();
        assert_eq!(h2, header);
        assert_eq!(s2.get(0), (&[2u32, 3, 4][..], &[1u8, 0, 1][..]));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(read_pairwise("".as_bytes()), Err(Error::Parse { line: 1, .. })));
        let bad_vertex = "# locrec pairwise n=3 family=ring r=1 theta=0.1 seed=0 m=1\n1 4 0\n";
        assert!(matches!(
            read_pairwise(bad_vertex.as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        let bad_bit = "# locrec pairwise n=3 family=ring r=1 theta=0.1 seed=0 m=1\n1 2 2\n";
        assert!(matches!(read_pairwise(bad_bit.as_bytes()), Err(Error::Parse { line: 2, .. })));
        let wrong_kind = "# locrec multilink n=3 family=ring r=1 p=0.1 L=2 seed=0 m=1\n";
        assert!(read_pairwise(wrong_kind.as_bytes()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn pairwise_roundtrip(seed in any::<u64>(), n in 5usize..60, theta in 0.0f64..0.5) {
            let t = build_topology(Family::Ring, n, 2, None).unwrap();
            let truth = Labeling::random(n, &mut ChaCha8Rng::seed_from_u64(seed));
            let set = draw_samples(&t, &truth, theta, 40.0, &mut ChaCha8Rng::seed_from_u64(seed ^ 1)).unwrap();
            let header = SampleHeader { n, family: Family::Ring, r: 2, seed, m_target: 40.0, noise: HeaderNoise::Theta(theta) };
            let mut out = Vec::new();
            write_pairwise(&mut out, &header, &set).unwrap();
            let (h2, s2) = read_pairwise(out.as_slice()).unwrap();
            prop_assert_eq!(h2, header);
            prop_assert_eq!(s2.samples(), set.samples());
            prop_assert_eq!(s2.theta, theta);
        }

        #[test]
        fn multilink_roundtrip(seed in any::<u64>(), p in 0.0f64..0.49) {
            let h = build_hyper_topology(Family::Ring, 30, 4, HyperEdgePolicy::Window { width: 3 }).unwrap();
            let truth = Labeling::random(30, &mut ChaCha8Rng::seed_from_u64(seed));
            let set = draw_hyper_samples(&h, &truth, p, 25.0, &mut ChaCha8Rng::seed_from_u64(seed ^ 2)).unwrap();
            let header = SampleHeader { n: 30, family: Family::Ring, r: 4, seed, m_target: 25.0, noise: HeaderNoise::Multilink { p, width: 3 } };
            let mut out = Vec::new();
            write_multilink(&mut out, &header, &set).unwrap();
            let (_, s2) = read_multilink(out.as_slice()).unwrap();
            prop_assert_eq!(s2.len(), set.len());
            for i in 0..set.len() {
                prop_assert_eq!(s2.get(i), set.get(i));
            }
        }
    }
}
