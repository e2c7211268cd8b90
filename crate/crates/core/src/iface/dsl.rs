//! Setup file parser and printer.
//!
//! ```text
//! document    := { section }
//! section     := "ring" ("Y" | "X") NL { ring_line }
//!              | "pullback" NL { NAME "->" poly NL }
//!              | "codim" INT NL
//!              | "module_gens" NL { NAME "=" poly NL }
//!              | "pushforward" NL { NAME "->" poly NL }
//!              | "bundle" { group [","] }
//!              | "truncate" INT NL
//! ring_line   := "gens" NAME ":" INT { "," NAME ":" INT }
//!              | "rels" poly { "," poly }
//! group       := "{" { "weight" INT | "rank" INT | "chern" poly { "," poly } } "}"
//! ```
//!
//! Section keywords are only recognized at the start of a line. `t` is
//! reserved for the equivariant parameter. `module_gens` defaults to
//! `mu1 = 1` and `truncate` to `codim + 4`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::blowup::{BlowupError, BlowupSetup};
use crate::chern::{BundleComponent, WeightedBundle};
use crate::gring::{GradedRing, PushforwardData, RingMap};
use crate::polyring::parse::{tokenize, Token, TokenKind, TokenStream};
use crate::polyring::{GenSignature, IntPolynomial, ParseError, EQUIVARIANT_PARAMETER};

const KEYWORDS: [&str; 7] = ["ring", "pullback", "codim", "module_gens", "pushforward", "bundle", "truncate"];

struct Section {
    header: Token,
    /// Tokens after the keyword on the header line.
    args: Vec<Token>,
    body: Vec<Vec<Token>>,
}

fn split_lines(tokens: Vec<Token>) -> Vec<Vec<Token>> {
    let mut lines = vec![Vec::new()];
    for t in tokens {
        match t.kind {
            TokenKind::Newline => lines.push(Vec::new()),
            TokenKind::Eof => {}
            _ => lines.last_mut().expect("nonempty").push(t),
        }
    }
    lines.retain(|l| !l.is_empty());
    lines
}

fn stream(tokens: &[Token], anchor: &Token) -> TokenStream {
    let last = tokens.last().unwrap_or(anchor);
    let eof = Token { kind: TokenKind::Eof, line: last.line, col: last.col + 1 };
    let mut v = tokens.to_vec();
    v.push(eof);
    TokenStream::new(v)
}

fn expect_end(ts: &TokenStream) -> Result<(), ParseError> {
    let t = ts.peek();
    if t.kind != TokenKind::Eof {
        return Err(t.error(format!("unexpected {}", t.kind)));
    }
    Ok(())
}

fn small_int(n: &BigInt, tok: &Token, what: &str) -> Result<u32, ParseError> {
    n.to_u32().ok_or_else(|| tok.error(format!("{what} `{n}` is out of range")))
}

fn sections(text: &str) -> Result<(Vec<Section>, Token), ParseError> {
    let tokens = tokenize(text)?;
    let end = tokens.last().cloned().expect("eof token");
    let mut out: Vec<Section> = Vec::new();
    for line in split_lines(tokens) {
        let first = &line[0];
        match &first.kind {
            TokenKind::Ident(k) if KEYWORDS.contains(&k.as_str()) => {
                out.push(Section { header: first.clone(), args: line[1..].to_vec(), body: Vec::new() })
            }
            _ => match out.last_mut() {
                Some(s) => s.body.push(line),
                None => return Err(first.error(format!("expected a section keyword, found {}", first.kind))),
            },
        }
    }
    Ok((out, end))
}

fn keyword(s: &Section) -> &str {
    match &s.header.kind {
        TokenKind::Ident(k) => k,
        _ => unreachable!("section headers are identifiers"),
    }
}

struct Sections {
    by_name: HashMap<String, Section>,
    end: Token,
}

impl Sections {
    fn collect(text: &str) -> Result<Self, ParseError> {
        let (list, end) = sections(text)?;
        let mut by_name: HashMap<String, Section> = HashMap::new();
        for s in list {
            let mut name = keyword(&s).to_string();
            if name == "ring" {
                let which = match s.args.as_slice() {
                    [Token { kind: TokenKind::Ident(w), .. }] if w == "Y" || w == "X" => w.clone(),
                    _ => return Err(s.header.error("expected `ring Y` or `ring X`")),
                };
                name = format!("ring {which}");
            }
            if by_name.contains_key(&name) {
                return Err(s.header.error(format!("duplicate section `{name}`")));
            }
            by_name.insert(name, s);
        }
        Ok(Sections { by_name, end })
    }

    fn required(&self, name: &str) -> Result<&Section, ParseError> {
        self.by_name.get(name).ok_or_else(|| self.end.error(format!("missing section `{name}`")))
    }

    fn optional(&self, name: &str) -> Option<&Section> {
        self.by_name.get(name)
    }
}

/// Body lines of a section, with any tokens after the keyword as a first line.
fn lines_of(s: &Section) -> Vec<Vec<Token>> {
    let mut lines = Vec::new();
    if !s.args.is_empty() {
        lines.push(s.args.clone());
    }
    lines.extend(s.body.iter().cloned());
    lines
}

fn single_int(s: &Section) -> Result<u32, ParseError> {
    if !s.body.is_empty() {
        return Err(s.body[0][0].error(format!("`{}` takes a single integer", keyword(s))));
    }
    let mut ts = stream(&s.args, &s.header);
    let (n, tok) = ts.expect_int()?;
    expect_end(&ts)?;
    small_int(&n, &tok, keyword(s))
}

fn parse_ring(s: &Section) -> Result<Arc<GradedRing>, ParseError> {
    let mut gens: Vec<(String, u32)> = Vec::new();
    let mut rel_lines = Vec::new();
    for line in &s.body {
        let mut ts = stream(&line[1..], &line[0]);
        match &line[0].kind {
            TokenKind::Ident(k) if k == "gens" => {
                if !rel_lines.is_empty() {
                    return Err(line[0].error("`gens` must come before `rels`"));
                }
                loop {
                    let (name, tok) = ts.expect_ident()?;
                    if name == EQUIVARIANT_PARAMETER {
                        return Err(tok.error("`t` is reserved for the equivariant parameter"));
                    }
                    if gens.iter().any(|(n, _)| *n == name) {
                        return Err(tok.error(format!("duplicate generator `{name}`")));
                    }
                    ts.expect(&TokenKind::Colon)?;
                    let (d, dtok) = ts.expect_int()?;
                    let d = small_int(&d, &dtok, "degree")?;
                    if d == 0 {
                        return Err(dtok.error("generator degrees must be positive"));
                    }
                    gens.push((name, d));
                    if !ts.eat(&TokenKind::Comma) {
                        break;
                    }
                }
                expect_end(&ts)?;
            }
            TokenKind::Ident(k) if k == "rels" => rel_lines.push(line),
            other => return Err(line[0].error(format!("expected `gens` or `rels`, found {other}"))),
        }
    }
    let sig = Arc::new(GenSignature::new(gens).map_err(|e| s.header.error(e.to_string()))?);
    let mut rels = Vec::new();
    for line in rel_lines {
        let mut ts = stream(&line[1..], &line[0]);
        loop {
            let at = ts.peek().clone();
            let r = ts.polynomial(&sig)?;
            if !r.is_homogeneous() {
                return Err(at.error(format!("relation `{r}` is not homogeneous")));
            }
            if r.degree() == Some(0) {
                return Err(at.error(format!("relation `{r}` is a nonzero constant")));
            }
            rels.push(r);
            if !ts.eat(&TokenKind::Comma) {
                break;
            }
        }
        expect_end(&ts)?;
    }
    GradedRing::new(sig, rels).map(Arc::new).map_err(|e| s.header.error(e.to_string()))
}

/// `NAME <sep> poly` lines, in order.
fn assignments(
    s: &Section,
    sep: TokenKind,
    sig: &Arc<GenSignature>,
) -> Result<Vec<(String, Token, IntPolynomial)>, ParseError> {
    let mut out: Vec<(String, Token, IntPolynomial)> = Vec::new();
    for line in lines_of(s) {
        let mut ts = stream(&line, &s.header);
        let (name, tok) = ts.expect_ident()?;
        if out.iter().any(|(n, _, _)| *n == name) {
            return Err(tok.error(format!("`{name}` is assigned twice")));
        }
        ts.expect(&sep)?;
        let p = ts.polynomial(sig)?;
        expect_end(&ts)?;
        out.push((name, tok, p));
    }
    Ok(out)
}

fn parse_bundle(s: &Section, rx: &Arc<GradedRing>) -> Result<(Vec<BundleComponent>, Vec<Token>), ParseError> {
    let tokens: Vec<Token> = lines_of(s).into_iter().flatten().collect();
    let mut ts = stream(&tokens, &s.header);
    let mut comps = Vec::new();
    let mut locs = Vec::new();
    loop {
        while ts.eat(&TokenKind::Comma) {}
        if ts.peek().kind == TokenKind::Eof {
            break;
        }
        let open = ts.expect(&TokenKind::LBrace)?;
        let (mut weight, mut rank, mut chern) = (None, None, Vec::new());
        loop {
            let t = ts.bump();
            match &t.kind {
                TokenKind::RBrace => break,
                TokenKind::Ident(f) if f == "weight" || f == "rank" => {
                    let (n, ntok) = ts.expect_int()?;
                    let n = small_int(&n, &ntok, f)?;
                    let slot = if f == "weight" { &mut weight } else { &mut rank };
                    if slot.replace(n).is_some() {
                        return Err(t.error(format!("`{f}` given twice")));
                    }
                }
                TokenKind::Ident(f) if f == "chern" => loop {
                    chern.push(ts.polynomial(rx.sig())?);
                    if !ts.eat(&TokenKind::Comma) {
                        break;
                    }
                },
                other => return Err(t.error(format!("expected `weight`, `rank`, `chern` or `}}`, found {other}"))),
            }
        }
        let weight = weight.ok_or_else(|| open.error("bundle component needs a `weight`"))?;
        if weight == 0 {
            return Err(open.error("bundle weights must be positive"));
        }
        comps.push(BundleComponent { weight, rank: rank.unwrap_or(1), chern });
        locs.push(open);
    }
    Ok((comps, locs))
}

fn section_for_check(check: &str) -> &'static str {
    match check {
        "codimension" => "codim",
        "truncation" => "truncate",
        "bundle base" | "bundle rank" => "bundle",
        _ => "pushforward",
    }
}

/// Parses and validates a setup document.
pub fn parse_setup(text: &str) -> Result<BlowupSetup, ParseError> {
    let secs = Sections::collect(text)?;
    let ry = parse_ring(secs.required("ring Y")?)?;
    let rx = parse_ring(secs.required("ring X")?)?;

    let pb = secs.required("pullback")?;
    let mut images = HashMap::new();
    for (name, tok, p) in assignments(pb, TokenKind::Arrow, rx.sig())? {
        if ry.sig().index_of(&name).is_none() {
            return Err(tok.error(format!("`{name}` is not a generator of ring Y")));
        }
        images.insert(name, p);
    }
    let pullback = RingMap::new(Arc::clone(&ry), Arc::clone(&rx), &images)
        .map_err(|e| pb.header.error(format!("pullback: {e}")))?;

    let codim = single_int(secs.required("codim")?)?;

    let mut gens = vec![("mu1".to_string(), IntPolynomial::one(rx.sig()))];
    if let Some(mg) = secs.optional("module_gens") {
        for (name, tok, p) in assignments(mg, TokenKind::Equals, rx.sig())? {
            if name == "mu1" {
                if p != IntPolynomial::one(rx.sig()) {
                    return Err(tok.error("`mu1` is always 1"));
                }
                continue;
            }
            if !p.is_homogeneous() || p.is_zero() {
                return Err(tok.error(format!("module generator `{name}` must be nonzero and homogeneous")));
            }
            gens.push((name, p));
        }
    }

    let pf = secs.required("pushforward")?;
    let mut push_images: HashMap<String, IntPolynomial> = HashMap::new();
    for (name, tok, p) in assignments(pf, TokenKind::Arrow, ry.sig())? {
        if !gens.iter().any(|(n, _)| *n == name) {
            return Err(tok.error(format!("`{name}` is not a module generator")));
        }
        push_images.insert(name, p);
    }
    let mut imgs = Vec::new();
    for (name, _) in &gens {
        imgs.push(push_images.remove(name).ok_or_else(|| pf.header.error(format!("missing pushforward of `{name}`")))?);
    }
    let push = PushforwardData::new(codim, gens, imgs).map_err(|e| pf.header.error(e.to_string()))?;

    let bs = secs.required("bundle")?;
    let (comps, locs) = parse_bundle(bs, &rx)?;
    let bundle = WeightedBundle::new(Arc::clone(&rx), comps).map_err(|e| {
        let at = match &e {
            crate::chern::ChernError::NonPositiveWeight(i)
            | crate::chern::ChernError::ZeroRank(i)
            | crate::chern::ChernError::TooManyChernClasses { index: i, .. }
            | crate::chern::ChernError::ChernDegree { index: i, .. } => locs.get(*i).unwrap_or(&bs.header),
            _ => &bs.header,
        };
        at.error(e.to_string())
    })?;

    let truncation = match secs.optional("truncate") {
        Some(s) => single_int(s)?,
        None => codim + 4,
    };

    BlowupSetup::new(pullback, push, bundle, codim, truncation).map_err(|e| match e {
        BlowupError::Invalid(rep) => {
            let first = rep.failures().next().map(|(c, _)| section_for_check(c)).unwrap_or("pushforward");
            let at = secs.optional(first).map(|s| &s.header).unwrap_or(&secs.end);
            at.error(format!("setup validation failed in `{first}`:\n{rep}"))
        }
        other => secs.end.error(other.to_string()),
    })
}

fn render_ring(out: &mut String, which: &str, r: &GradedRing) {
    let _ = writeln!(out, "ring {which}");
    if !r.sig().is_empty() {
        let gens: Vec<String> =
            r.sig().names().iter().zip(r.sig().degrees()).map(|(n, d)| format!("{n}:{d}")).collect();
        let _ = writeln!(out, "  gens {}", gens.join(", "));
    }
    if !r.relations().is_empty() {
        let rels: Vec<String> = r.relations().iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "  rels {}", rels.join(", "));
    }
}

/// Prints a setup in the document syntax; parsing the result gives back the
/// same setup.
pub fn render_setup(s: &BlowupSetup) -> String {
    let mut out = String::new();
    render_ring(&mut out, "Y", s.ry());
    render_ring(&mut out, "X", s.rx());
    out.push_str("pullback\n");
    for (name, img) in s.ry().sig().names().iter().zip(s.pullback().images()) {
        let _ = writeln!(out, "  {name} -> {img}");
    }
    let _ = writeln!(out, "codim {}", s.codim());
    let push = s.pushforward();
    if push.names().len() > 1 {
        out.push_str("module_gens\n");
        for (name, g) in push.names().iter().zip(push.generators()).skip(1) {
            let _ = writeln!(out, "  {name} = {g}");
        }
    }
    out.push_str("pushforward\n");
    for (name, img) in push.names().iter().zip(push.images()) {
        let _ = writeln!(out, "  {name} -> {img}");
    }
    out.push_str("bundle\n");
    for c in s.bundle().components() {
        let _ = write!(out, "  {{weight {} rank {}", c.weight, c.rank);
        if !c.chern.is_empty() {
            let cs: Vec<String> = c.chern.iter().map(|p| p.to_string()).collect();
            let _ = write!(out, " chern {}", cs.join(", "));
        }
        out.push_str("}\n");
    }
    let _ = writeln!(out, "truncate {}", s.truncation());
    out
}
