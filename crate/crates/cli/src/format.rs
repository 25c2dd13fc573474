//! Line-oriented network file format.
//!
//! ```text
//! # comment
//! species A B
//! reaction 2 A -> A ; k = [1, 1]
//! reaction 2 B -> A + B ; k = [3, 3]
//! reaction 0 -> B ; k = [1, 1]
//! allotment B = (1, 2)
//! x0 = [1, 1]
//! repulsing = {A}
//! ```
//!
//! Complexes are `+`-separated terms `coeff name` (real decimal
//! coefficient, default 1; `2A` and `2 A` both parse); the literal `0`
//! denotes the all-zeros complex. Every reaction carries a compact rate
//! interval after `; k =`. Allotment lines are optional and default to
//! `(0, inf)`; `inf` is the unbounded endpoint literal. `x0` is required.
//! The serializer emits this exact canonical shape, so canonical files
//! round-trip byte-for-byte.

use crn_core::cube::RepulsingIndexSet;
use crn_core::interval::PositiveInterval;
use crn_core::model::{
    Allotment, Complex, Reaction, ReactionNetwork, SpeciesSet, SubconfinedSystem, Tempering,
};
use thiserror::Error;

#[derive(Debug, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// A parsed network document: the subconfined system plus the optional
/// repulsing index set.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkDocument {
    pub system: SubconfinedSystem,
    pub repulsing: RepulsingIndexSet,
}

fn parse_f64(s: &str, line: usize, what: &str) -> Result<f64, ParseError> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    t.parse::<f64>().map_err(|_| err(line, format!("cannot parse {what} from {t:?}")))
}

/// One `+`-separated complex term: optional real coefficient followed by a
/// species name; the longest numeric prefix wins.
fn parse_term(term: &str, species: &SpeciesSet, line: usize) -> Result<(usize, f64), ParseError> {
    let t = term.trim();
    if t.is_empty() {
        return Err(err(line, "empty complex term"));
    }
    if let Some(idx) = species.index_of(t) {
        return Ok((idx, 1.0));
    }
    for split in (1..t.len()).rev() {
        if !t.is_char_boundary(split) {
            continue;
        }
        let (head, tail) = t.split_at(split);
        let name = tail.trim();
        if name.is_empty() {
            continue;
        }
        if let Ok(coeff) = head.trim().parse::<f64>() {
            if let Some(idx) = species.index_of(name) {
                return Ok((idx, coeff));
            }
        }
    }
    Err(err(line, format!("cannot parse complex term {t:?} (unknown species?)")))
}

fn parse_complex(text: &str, species: &SpeciesSet, line: usize) -> Result<Complex, ParseError> {
    let mut coeffs = vec![0.0; species.len()];
    let body = text.trim();
    if body.is_empty() {
        return Err(err(line, "empty complex"));
    }
    for term in body.split('+') {
        let t = term.trim();
        if t == "0" {
            continue; // the zero complex contributes nothing
        }
        let (idx, coeff) = parse_term(t, species, line)?;
        coeffs[idx] += coeff;
    }
    Complex::new(coeffs).map_err(|e| err(line, e.to_string()))
}

fn parse_bracketed(
    text: &str,
    open: char,
    close: char,
    line: usize,
) -> Result<&str, ParseError> {
    let t = text.trim();
    if !(t.starts_with(open) && t.ends_with(close) && t.len() >= 2) {
        return Err(err(line, format!("expected {open}...{close}, got {t:?}")));
    }
    Ok(&t[open.len_utf8()..t.len() - close.len_utf8()])
}

pub fn parse(input: &str) -> Result<NetworkDocument, ParseError> {
    let mut species: Option<SpeciesSet> = None;
    let mut reactions: Vec<(Reaction, PositiveInterval, usize)> = Vec::new();
    let mut allotment_entries: Vec<(usize, PositiveInterval, usize)> = Vec::new();
    let mut x0: Option<(Vec<f64>, usize)> = None;
    let mut repulsing = RepulsingIndexSet::default();

    for (i, raw) in input.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix("species") {
            if species.is_some() {
                return Err(err(line, "duplicate species line"));
            }
            let names: Vec<&str> = rest.split_whitespace().collect();
            species =
                Some(SpeciesSet::new(names).map_err(|e| err(line, e.to_string()))?);
        } else if let Some(rest) = text.strip_prefix("reaction") {
            let sp = species
                .as_ref()
                .ok_or_else(|| err(line, "species must be declared before reactions"))?;
            let (arrow_part, rate_part) = rest
                .split_once(';')
                .ok_or_else(|| err(line, "reaction needs a rate clause `; k = [lo, hi]`"))?;
            let (lhs, rhs) = arrow_part
                .split_once("->")
                .ok_or_else(|| err(line, "reaction needs `->`"))?;
            let reactant = parse_complex(lhs, sp, line)?;
            let product = parse_complex(rhs, sp, line)?;
            let rate_body = rate_part
                .trim()
                .strip_prefix("k")
                .map(|s| s.trim())
                .and_then(|s| s.strip_prefix('='))
                .ok_or_else(|| err(line, "rate clause must look like `k = [lo, hi]`"))?;
            let inner = parse_bracketed(rate_body, '[', ']', line)?;
            let (lo_s, hi_s) = inner
                .split_once(',')
                .ok_or_else(|| err(line, "rate interval needs two endpoints"))?;
            let lo = parse_f64(lo_s, line, "rate lower endpoint")?;
            let hi = parse_f64(hi_s, line, "rate upper endpoint")?;
            let interval =
                PositiveInterval::closed(lo, hi).map_err(|e| err(line, e.to_string()))?;
            if !interval.is_bounded() {
                return Err(err(line, "rate interval must be bounded away from 0 and inf"));
            }
            let reaction = Reaction::new(reactant, product).map_err(|e| err(line, e.to_string()))?;
            if reactions.iter().any(|(r, _, _)| *r == reaction) {
                return Err(err(line, "duplicate reaction"));
            }
            reactions.push((reaction, interval, line));
        } else if let Some(rest) = text.strip_prefix("allotment") {
            let sp = species
                .as_ref()
                .ok_or_else(|| err(line, "species must be declared before allotments"))?;
            let (name, body) = rest
                .split_once('=')
                .ok_or_else(|| err(line, "allotment needs `name = (lo, hi)`"))?;
            let idx = sp
                .index_of(name.trim())
                .ok_or_else(|| err(line, format!("unknown species {:?}", name.trim())))?;
            let inner = parse_bracketed(body, '(', ')', line)?;
            let (lo_s, hi_s) = inner
                .split_once(',')
                .ok_or_else(|| err(line, "allotment interval needs two endpoints"))?;
            let lo = parse_f64(lo_s, line, "allotment lower endpoint")?;
            let hi = parse_f64(hi_s, line, "allotment upper endpoint")?;
            let interval =
                PositiveInterval::open(lo, hi).map_err(|e| err(line, e.to_string()))?;
            if allotment_entries.iter().any(|(j, _, _)| *j == idx) {
                return Err(err(line, format!("duplicate allotment for {:?}", name.trim())));
            }
            allotment_entries.push((idx, interval, line));
        } else if let Some(rest) = text.strip_prefix("x0") {
            let body = rest
                .trim()
                .strip_prefix('=')
                .ok_or_else(|| err(line, "expected `x0 = [v1, ..., vn]`"))?;
            let inner = parse_bracketed(body, '[', ']', line)?;
            let values: Vec<f64> = inner
                .split(',')
                .map(|v| parse_f64(v, line, "x0 component"))
                .collect::<Result<_, _>>()?;
            if x0.is_some() {
                return Err(err(line, "duplicate x0 line"));
            }
            x0 = Some((values, line));
        } else if let Some(rest) = text.strip_prefix("repulsing") {
            let body = rest
                .trim()
                .strip_prefix('=')
                .ok_or_else(|| err(line, "expected `repulsing = {name, ...}`"))?;
            let inner = parse_bracketed(body, '{', '}', line)?;
            let names = inner
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string);
            repulsing = RepulsingIndexSet::new(names);
        } else {
            return Err(err(line, format!("unrecognized directive: {text:?}")));
        }
    }

    let species = species.ok_or_else(|| err(input.lines().count(), "missing species line"))?;
    let (x0_values, x0_line) =
        x0.ok_or_else(|| err(input.lines().count(), "missing x0 line"))?;
    if x0_values.len() != species.len() {
        return Err(err(
            x0_line,
            format!("x0 has {} components but there are {} species", x0_values.len(), species.len()),
        ));
    }

    let network = ReactionNetwork::from_reactions(
        species.clone(),
        reactions.iter().map(|(r, _, _)| r.clone()).collect(),
    )
    .map_err(|e| err(1, e.to_string()))?;
    let tempering = Tempering::new(&network, reactions.iter().map(|(_, iv, _)| *iv).collect())
        .map_err(|e| err(1, e.to_string()))?;
    let mut intervals = vec![PositiveInterval::positive_ray(); species.len()];
    for (idx, iv, _) in &allotment_entries {
        intervals[*idx] = *iv;
    }
    let allotment = Allotment::new(&species, intervals).map_err(|e| err(1, e.to_string()))?;
    let system = SubconfinedSystem::new(network, tempering, allotment, x0_values)
        .map_err(|e| err(x0_line, e.to_string()))?;
    Ok(NetworkDocument { system, repulsing })
}

fn fmt_f64(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{v}")
    }
}

pub fn format_complex(c: &Complex, species: &SpeciesSet) -> String {
    let mut terms = Vec::new();
    for (i, &coeff) in c.coeffs().iter().enumerate() {
        if coeff == 0.0 {
            continue;
        }
        if coeff == 1.0 {
            terms.push(species.name(i).to_string());
        } else {
            terms.push(format!("{} {}", fmt_f64(coeff), species.name(i)));
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

pub fn format_reaction(r: &Reaction, species: &SpeciesSet) -> String {
    format!(
        "{} -> {}",
        format_complex(&r.reactant, species),
        format_complex(&r.product, species)
    )
}

/// Canonical serialization; parsing the output reproduces the document.
pub fn serialize(doc: &NetworkDocument) -> String {
    let sys = &doc.system;
    let species = sys.network.species();
    let mut out = String::new();
    out.push_str("species ");
    out.push_str(&species.names().join(" "));
    out.push('\n');
    for (i, r) in sys.network.reactions().iter().enumerate() {
        let iv = sys.tempering.interval(i);
        out.push_str(&format!(
            "reaction {} ; k = [{}, {}]\n",
            format_reaction(r, species),
            fmt_f64(iv.lo),
            fmt_f64(iv.hi)
        ));
    }
    for i in 0..species.len() {
        let iv = sys.allotment.interval(i);
        if *iv != PositiveInterval::positive_ray() {
            out.push_str(&format!(
                "allotment {} = ({}, {})\n",
                species.name(i),
                fmt_f64(iv.lo),
                fmt_f64(iv.hi)
            ));
        }
    }
    let coords: Vec<String> = sys.base_point.iter().map(|v| fmt_f64(*v)).collect();
    out.push_str(&format!("x0 = [{}]\n", coords.join(", ")));
    if !doc.repulsing.0.is_empty() {
        let names: Vec<&str> = doc.repulsing.0.iter().map(String::as_str).collect();
        out.push_str(&format!("repulsing = {{{}}}\n", names.join(", ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const LV_REV: &str = "\
species A B
reaction 2 A -> A ; k = [1, 1]
reaction 2 B -> A + B ; k = [3, 3]
reaction 0 -> B ; k = [1, 1]
allotment B = (1, 2)
x0 = [1, 1]
";

    #[test]
    fn parses_reversed_lv() {
        let doc = parse(LV_REV).unwrap();
        let net = &doc.system.network;
        assert_eq!(net.species().names(), &["A".to_string(), "B".to_string()]);
        assert_eq!(net.reactions().len(), 3);
        assert_eq!(net.reactions()[0].reactant.coeffs(), &[2.0, 0.0]);
        assert_eq!(doc.system.tempering.interval(1).lo, 3.0);
        assert_eq!(doc.system.allotment.interval(1).lo, 1.0);
        assert!(doc.system.allotment.interval(0).hi.is_infinite());
    }

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let doc = parse(LV_REV).unwrap();
        let text = serialize(&doc);
        assert_eq!(text, LV_REV);
        let reparsed = parse(&text).unwrap();
        assert_eq!(reparsed, doc);
    }

    #[test]
    fn accepts_tight_and_spaced_coefficients() {
        let a = parse("species A B\nreaction 2A -> A + B ; k = [1, 2]\nx0 = [1, 1]\n").unwrap();
        let b = parse("species A B\nreaction 2 A -> A + B ; k = [1, 2]\nx0 = [1, 1]\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn accepts_real_and_negative_coefficients() {
        let doc = parse(
            "species A B\nreaction 1.5 A + -0.5 B -> 0 ; k = [1, 1]\nx0 = [1, 1]\n",
        )
        .unwrap();
        let r = &doc.system.network.reactions()[0];
        assert_eq!(r.reactant.coeffs(), &[1.5, -0.5]);
        assert_eq!(r.product.coeffs(), &[0.0, 0.0]);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let doc = parse(
            "# a file\nspecies A\n\nreaction 0 -> A ; k = [1, 1] # grow\nx0 = [1] # start\n",
        )
        .unwrap();
        assert_eq!(doc.system.network.reactions().len(), 1);
    }

    #[test]
    fn repulsing_set_round_trips() {
        let text = "species A B\nreaction A -> B ; k = [1, 1]\nx0 = [1, 1]\nrepulsing = {A, B}\n";
        let doc = parse(text).unwrap();
        assert!(doc.repulsing.contains("A") && doc.repulsing.contains("B"));
        assert_eq!(serialize(&doc), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse("species A\nreaction 0 -> Q ; k = [1, 1]\nx0 = [1]\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse("species A\nreaction 0 -> A ; k = [0, 1]\nx0 = [1]\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse("species A\nreaction 0 -> A ; k = [1, 1]\nx0 = [1, 2]\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse("species A\nnonsense here\nx0 = [1]\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn missing_required_lines() {
        assert!(parse("x0 = [1]\n").is_err());
        assert!(parse("species A\nreaction 0 -> A ; k = [1, 1]\n").is_err());
    }

    #[test]
    fn duplicate_reaction_rejected() {
        let e = parse(
            "species A\nreaction 0 -> A ; k = [1, 1]\nreaction 0 -> A ; k = [2, 2]\nx0 = [1]\n",
        )
        .unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn x0_must_lie_in_allotment_closure() {
        let e = parse(
            "species A\nreaction 0 -> A ; k = [1, 1]\nallotment A = (2, 3)\nx0 = [1]\n",
        )
        .unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn random_documents_round_trip() {
        use crn_core::random::NetworkSampler;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let sampler = NetworkSampler::default();
        for _ in 0..30 {
            let system = sampler.bounded_system(&mut rng);
            let doc = NetworkDocument { system, repulsing: RepulsingIndexSet::default() };
            let text = serialize(&doc);
            let reparsed = parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert_eq!(reparsed, doc, "document drifted:\n{text}");
            assert_eq!(serialize(&reparsed), text);
        }
    }
}
