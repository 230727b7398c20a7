//! Presentation files: sectioned text describing an algebra, its derivation,
//! the form calculus, a ladder diagram and sphere or matrix data.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::dga::{Calculus, FormElement};
use crate::homconn::{HomConnection, HomForm};
use crate::integrals::LadderDiagram;
use crate::linmap::{MapExpr, MapMatrix, MatrixAlgebraMap};
use crate::matrixcalc::{DerBasis, MatrixCalculus};
use crate::multider::TwistedMultiDerivation;
use crate::ncalg::{render_terms, AlgElement, HopfData, Presentation, Rule, TensorElement, Word};
use crate::scalars::ScalarRF;

use super::expr::{lex, Cursor, Scope, Tok};
use super::{LoadError, ParseError};

const SECTIONS: [&str; 10] = ["scalars", "algebra", "grading", "hopf", "derivation", "calculus", "forms", "ladder", "sphere", "matrix"];

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    pub name: String,
    pub gens: Vec<String>,
    pub rules: Vec<Rule>,
    pub grading: Option<Vec<i64>>,
}

/// A map A → A as written in a file.
#[derive(Clone, Debug, PartialEq)]
pub enum MapDesc {
    Zero,
    Identity,
    Grade(ScalarRF, i64),
    /// Multiplicative map given by generator images.
    Images(Vec<AlgElement>),
}

impl MapDesc {
    fn to_expr(&self) -> MapExpr {
        match self {
            MapDesc::Zero => MapExpr::zero(),
            MapDesc::Identity => MapExpr::identity(),
            MapDesc::Grade(b, e) => MapExpr::grade_scale(b.clone(), *e),
            MapDesc::Images(v) => MapExpr::algebra_map(v.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SigmaDesc {
    Diagonal(Vec<MapDesc>),
    /// Per generator, the n×n image matrix in row-major order.
    Matrix(Vec<Vec<AlgElement>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationSpec {
    pub n: usize,
    pub partials: Vec<Vec<AlgElement>>,
    pub sigma: SigmaDesc,
    pub inverses: Option<Vec<MapDesc>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalculusSpec {
    pub forms: Vec<String>,
    pub top: usize,
    pub rules: Vec<Rule>,
    /// Bases in degrees 2..=top; degree 1 is the list of forms.
    pub higher_basis: Vec<Vec<Word>>,
    pub d_forms: Vec<FormElement>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereSpec {
    /// Δ(α²) and Δ(δ²) written out by hand.
    pub sweedler_alpha2: TensorElement,
    pub sweedler_delta2: TensorElement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSpec {
    pub n: usize,
    pub basis: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PresentationFile {
    pub params: Vec<String>,
    pub algebra: Option<AlgebraSpec>,
    pub hopf: Option<HopfData>,
    pub derivation: Option<DerivationSpec>,
    pub calculus: Option<CalculusSpec>,
    pub ladder: Option<LadderDiagram>,
    pub sphere: Option<SphereSpec>,
    pub matrix: Option<MatrixSpec>,
}

struct Line {
    no: usize,
    col: usize,
    text: String,
}

impl Line {
    fn tokens(&self, forms: &[String]) -> Result<Vec<super::expr::Token>, ParseError> {
        lex(&self.text, self.no, self.col, forms)
    }

    fn end(&self) -> usize {
        self.col + self.text.chars().count()
    }
}

fn split_sections(src: &str) -> Result<BTreeMap<&'static str, Vec<Line>>, ParseError> {
    let mut out: BTreeMap<&'static str, Vec<Line>> = BTreeMap::new();
    let mut current: Option<&'static str> = None;
    for (i, raw) in src.lines().enumerate() {
        let no = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = body.find(|c: char| !c.is_whitespace()).map_or(1, |p| body[..p].chars().count() + 1);
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| ParseError::new(no, col + trimmed.chars().count(), "`]`"))?.trim();
            let sec = SECTIONS.iter().find(|s| **s == name).ok_or_else(|| ParseError::new(no, col + 1, &format!("one of the sections {}", SECTIONS.join(", "))))?;
            if out.contains_key(sec) {
                return Err(ParseError::new(no, col + 1, "a section not seen before"));
            }
            out.insert(sec, Vec::new());
            current = Some(sec);
            continue;
        }
        let sec = current.ok_or_else(|| ParseError::new(no, col, "a section header such as [algebra]"))?;
        out.get_mut(sec).expect("inserted").push(Line { no, col, text: trimmed.to_string() });
    }
    Ok(out)
}

fn key_is(c: &Cursor, k: &str) -> bool {
    matches!(c.peek(), Some(Tok::Ident(s)) if s == k)
}

fn names_list(c: &mut Cursor) -> Result<Vec<String>, ParseError> {
    c.list(|c| c.ident("a name"))
}

fn find(names: &[String], n: &str, c: &Cursor, what: &str) -> Result<usize, ParseError> {
    names.iter().position(|x| x == n).ok_or_else(|| c.err(what))
}

fn map_desc(c: &mut Cursor, sc: &Scope) -> Result<MapDesc, ParseError> {
    if let Some(Tok::Num(n)) = c.peek() {
        let zero = n == &0.into();
        let one = n == &1.into();
        if zero || one {
            c.next();
            return Ok(if zero { MapDesc::Zero } else { MapDesc::Identity });
        }
    }
    let head = c.ident("`grade(...)`, `map(...)`, `id` or `0`")?;
    match head.as_str() {
        "id" => Ok(MapDesc::Identity),
        "grade" => {
            c.expect(&Tok::LParen, "`(`")?;
            let b = c.scalar(sc)?;
            c.expect(&Tok::Comma, "`,`")?;
            let e = c.int()?;
            c.expect(&Tok::RParen, "`)`")?;
            Ok(MapDesc::Grade(b, e))
        }
        "map" => {
            c.expect(&Tok::LParen, "`(`")?;
            let mut images = vec![None; sc.gens.len()];
            let pairs = c.list(|c| {
                let g = c.ident("a generator")?;
                let gi = find(sc.gens, &g, c, "a generator")?;
                c.expect(&Tok::Colon, "`:`")?;
                Ok((gi, c.element(sc)?))
            })?;
            for (g, a) in pairs {
                images[g] = Some(a);
            }
            c.expect(&Tok::RParen, "`)`")?;
            let images = images.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| c.err("an image for every generator"))?;
            Ok(MapDesc::Images(images))
        }
        _ => Err(c.err("`grade`, `map` or `id`")),
    }
}

impl PresentationFile {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let secs = split_sections(src)?;
        let mut pf = PresentationFile::default();
        let empty = Vec::new();
        let lines = |s: &str| secs.get(s).unwrap_or(&empty);

        for l in lines("scalars") {
            let toks = l.tokens(&[])?;
            let mut c = Cursor::new(&toks, l.no, l.end());
            c.expect(&Tok::Ident("params".into()), "`params`")?;
            c.expect(&Tok::Eq, "`=`")?;
            pf.params.extend(names_list(&mut c)?);
            c.finish()?;
        }
        if pf.params.is_empty() {
            pf.params = vec!["q".into()];
        }

        // [algebra] and [grading] together make the presentation
        if secs.contains_key("algebra") {
            let mut name = String::from("algebra");
            let mut gens: Vec<String> = Vec::new();
            let mut relations = Vec::new();
            for l in lines("algebra") {
                let toks = l.tokens(&[])?;
                let mut c = Cursor::new(&toks, l.no, l.end());
                let key = c.ident("`name`, `generators` or `relation`")?;
                match key.as_str() {
                    "name" => {
                        c.expect(&Tok::Eq, "`=`")?;
                        name = l.text.split_once('=').map(|(_, r)| r.trim().to_string()).unwrap_or_default();
                        if name.is_empty() || name.contains(char::is_whitespace) {
                            return Err(c.err("a name without spaces"));
                        }
                        continue;
                    }
                    "generators" => {
                        c.expect(&Tok::Eq, "`=`")?;
                        gens = names_list(&mut c)?;
                    }
                    "relation" => {
                        c.expect(&Tok::Colon, "`:`")?;
                        let sc = Scope { params: &pf.params, gens: &gens, ..Default::default() };
                        let lhs = c.element(&sc)?;
                        c.expect(&Tok::Eq, "`=`")?;
                        let rhs = c.element(&sc)?;
                        let poly: Vec<(Word, ScalarRF)> = lhs.minus(&rhs).into_terms().collect();
                        relations.push(Rule::orient(poly).ok_or_else(|| ParseError::new(l.no, l.col, "a relation with a nonzero difference"))?);
                    }
                    _ => return Err(ParseError::new(l.no, l.col, "`name`, `generators` or `relation`")),
                }
                c.finish()?;
            }
            let mut grading = None;
            if let Some(gl) = secs.get("grading") {
                let mut deg = vec![None; gens.len()];
                for l in gl {
                    let toks = l.tokens(&[])?;
                    let mut c = Cursor::new(&toks, l.no, l.end());
                    let g = c.ident("a generator")?;
                    let gi = find(&gens, &g, &c, "a generator").map_err(|_| ParseError::new(l.no, l.col, "a generator"))?;
                    c.expect(&Tok::Eq, "`=`")?;
                    deg[gi] = Some(c.int()?);
                    c.finish()?;
                }
                let last = gl.last().map_or(1, |l| l.no);
                grading = Some(deg.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| ParseError::new(last, 1, "a degree for every generator"))?);
            }
            pf.algebra = Some(AlgebraSpec { name, gens, rules: relations, grading });
        } else if secs.contains_key("grading") || secs.contains_key("hopf") || secs.contains_key("derivation") {
            let l = &lines("grading").iter().chain(lines("hopf")).chain(lines("derivation")).next().map(|l| (l.no, l.col)).unwrap_or((1, 1));
            return Err(ParseError::new(l.0, l.1, "an [algebra] section first"));
        }

        let pres = match &pf.algebra {
            Some(a) => Some(
                Presentation::new(a.name.clone(), a.gens.clone(), a.rules.clone(), a.grading.clone())
                    .map_err(|e| ParseError::new(lines("algebra").first().map_or(1, |l| l.no), 1, &format!("a valid presentation ({e})")))?,
            ),
            None => None,
        };
        let gens = pf.algebra.as_ref().map(|a| a.gens.clone()).unwrap_or_default();
        let sc = Scope { params: &pf.params, gens: &gens, forms: &[], pres: pres.as_ref() };

        if let Some(hl) = secs.get("hopf") {
            let ng = gens.len();
            let mut coproduct = vec![None; ng];
            let mut counit = vec![None; ng];
            let mut antipode = vec![None; ng];
            let mut antipode_inv = vec![None; ng];
            for l in hl {
                let toks = l.tokens(&[])?;
                let mut c = Cursor::new(&toks, l.no, l.end());
                let key = c.ident("`coproduct`, `counit`, `antipode` or `antipode_inv`")?;
                let g = c.ident("a generator")?;
                let gi = find(&gens, &g, &c, "a generator")?;
                c.expect(&Tok::Eq, "`=`")?;
                match key.as_str() {
                    "coproduct" => coproduct[gi] = Some(c.tensor(&sc)?),
                    "counit" => counit[gi] = Some(c.scalar(&sc)?),
                    "antipode" => antipode[gi] = Some(c.element(&sc)?),
                    "antipode_inv" => antipode_inv[gi] = Some(c.element(&sc)?),
                    _ => return Err(ParseError::new(l.no, l.col, "`coproduct`, `counit`, `antipode` or `antipode_inv`")),
                }
                c.finish()?;
            }
            let last = hl.last().map_or(1, |l| l.no);
            let all = |what: &str| ParseError::new(last, 1, &format!("a {what} entry for every generator"));
            pf.hopf = Some(HopfData {
                coproduct: coproduct.into_iter().collect::<Option<_>>().ok_or_else(|| all("coproduct"))?,
                counit: counit.into_iter().collect::<Option<_>>().ok_or_else(|| all("counit"))?,
                antipode: antipode.into_iter().collect::<Option<_>>().ok_or_else(|| all("antipode"))?,
                antipode_inv: antipode_inv.into_iter().collect::<Option<_>>().ok_or_else(|| all("antipode_inv"))?,
            });
        }

        if let Some(dl) = secs.get("derivation") {
            let mut n = None;
            let mut partials = vec![None; gens.len()];
            let mut diag = None;
            let mut sigma_rows: Vec<Option<Vec<AlgElement>>> = vec![None; gens.len()];
            let mut inverses = None;
            for l in dl {
                let toks = l.tokens(&[])?;
                let mut c = Cursor::new(&toks, l.no, l.end());
                let key = c.ident("`n`, `partial`, `sigma` or `inverses`")?;
                match key.as_str() {
                    "n" => {
                        c.expect(&Tok::Eq, "`=`")?;
                        n = Some(usize::try_from(c.int()?).map_err(|_| c.err("a positive size"))?);
                    }
                    "partial" => {
                        let g = c.ident("a generator")?;
                        let gi = find(&gens, &g, &c, "a generator")?;
                        c.expect(&Tok::Eq, "`=`")?;
                        partials[gi] = Some(c.list(|c| c.element(&sc))?);
                    }
                    "sigma" if c.eat(&Tok::Eq) => {
                        let h = c.ident("`diag`")?;
                        if h != "diag" {
                            return Err(ParseError::new(l.no, l.col, "`diag(...)`"));
                        }
                        c.expect(&Tok::LParen, "`(`")?;
                        diag = Some(c.list(|c| map_desc(c, &sc))?);
                        c.expect(&Tok::RParen, "`)`")?;
                    }
                    "sigma" => {
                        let g = c.ident("a generator or `=`")?;
                        let gi = find(&gens, &g, &c, "a generator")?;
                        c.expect(&Tok::Eq, "`=`")?;
                        c.expect(&Tok::LBracket, "`[`")?;
                        let mut entries = Vec::new();
                        loop {
                            entries.extend(c.list(|c| c.element(&sc))?);
                            if !c.eat(&Tok::Semi) {
                                break;
                            }
                        }
                        c.expect(&Tok::RBracket, "`]`")?;
                        sigma_rows[gi] = Some(entries);
                    }
                    "inverses" => {
                        c.expect(&Tok::Eq, "`=`")?;
                        inverses = Some(c.list(|c| map_desc(c, &sc))?);
                    }
                    _ => return Err(ParseError::new(l.no, l.col, "`n`, `partial`, `sigma` or `inverses`")),
                }
                c.finish()?;
            }
            let last = dl.last().map_or(1, |l| l.no);
            let n = n.ok_or_else(|| ParseError::new(last, 1, "a line `n = ...`"))?;
            let partials = partials.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| ParseError::new(last, 1, "a partial line for every generator"))?;
            let sigma = match diag {
                Some(d) => SigmaDesc::Diagonal(d),
                None => SigmaDesc::Matrix(sigma_rows.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| ParseError::new(last, 1, "`sigma = diag(...)` or a sigma line for every generator"))?),
            };
            pf.derivation = Some(DerivationSpec { n, partials, sigma, inverses });
        }

        if let Some(cl) = secs.get("calculus") {
            let mut forms = Vec::new();
            let mut top = None;
            for l in cl {
                let toks = l.tokens(&[])?;
                let mut c = Cursor::new(&toks, l.no, l.end());
                let key = c.ident("`forms` or `top`")?;
                c.expect(&Tok::Eq, "`=`")?;
                match key.as_str() {
                    "forms" => {
                        // raw names may carry a trailing sign, as in w- and w+
                        forms = l.text.split_once('=').map(|(_, r)| r.split(',').map(|s| s.trim().to_string()).collect()).unwrap_or_default();
                        if forms.iter().any(|f: &String| f.is_empty() || f.contains(|ch: char| ch.is_whitespace() || ".*@()".contains(ch))) {
                            return Err(ParseError::new(l.no, l.col, "comma-separated form names"));
                        }
                        continue;
                    }
                    "top" => top = Some(usize::try_from(c.int()?).map_err(|_| c.err("a positive degree"))?),
                    _ => return Err(ParseError::new(l.no, l.col, "`forms` or `top`")),
                }
                c.finish()?;
            }
            let last = cl.last().map_or(1, |l| l.no);
            let top = top.ok_or_else(|| ParseError::new(last, 1, "a line `top = ...`"))?;
            let fsc = Scope { forms: &forms, ..sc };
            let mut rules = Vec::new();
            let mut higher: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
            let mut d_forms = vec![None; forms.len()];
            for l in lines("forms") {
                let toks = l.tokens(&forms)?;
                let mut c = Cursor::new(&toks, l.no, l.end());
                if key_is(&c, "form_basis") {
                    c.next();
                    c.expect(&Tok::Dot, "`.`")?;
                    let k = usize::try_from(c.int()?).map_err(|_| c.err("a degree"))?;
                    if k < 2 || k > top {
                        return Err(ParseError::new(l.no, l.col, &format!("a degree between 2 and {top}")));
                    }
                    c.expect(&Tok::Eq, "`=`")?;
                    c.expect(&Tok::LBracket, "`[`")?;
                    higher.insert(k, c.list(|c| c.form_word(&fsc))?);
                    c.expect(&Tok::RBracket, "`]`")?;
                } else if key_is(&c, "d") {
                    c.next();
                    let w = c.form_word(&fsc)?;
                    if w.len() != 1 {
                        return Err(ParseError::new(l.no, l.col, "`d` of a single form"));
                    }
                    c.expect(&Tok::Eq, "`=`")?;
                    d_forms[w.get(0)] = Some(c.form(&fsc, Some(2))?);
                } else {
                    let lhs = c.form_word(&fsc)?;
                    c.expect(&Tok::Arrow, "`->`")?;
                    let rhs = c.form(&fsc, Some(lhs.len()))?;
                    let mut terms = Vec::new();
                    for (w, a) in rhs.coords() {
                        let k = a.as_scalar().ok_or_else(|| ParseError::new(l.no, l.col, "scalar coefficients in a form rule"))?;
                        terms.push((w.clone(), k));
                    }
                    rules.push(Rule::new(lhs, terms));
                }
                c.finish()?;
            }
            let higher_basis = (2..=top).map(|k| higher.remove(&k).ok_or_else(|| ParseError::new(last, 1, &format!("form_basis.{k}")))).collect::<Result<Vec<_>, _>>()?;
            let d_forms = d_forms.into_iter().map(|d| d.unwrap_or_else(|| FormElement::zero(2))).collect();
            pf.calculus = Some(CalculusSpec { forms, top, rules, higher_basis, d_forms });
        } else if secs.contains_key("forms") || secs.contains_key("ladder") {
            return Err(ParseError::new(lines("forms").iter().chain(lines("ladder")).next().map_or(1, |l| l.no), 1, "a [calculus] section first"));
        }

        if let Some(ll) = secs.get("ladder") {
            let cs = pf.calculus.as_ref().expect("checked above");
            let fsc = Scope { forms: &cs.forms, ..sc };
            let mut verticals: Vec<BTreeMap<Word, HomForm>> = vec![BTreeMap::new(); cs.top];
            let mut theta = None;
            for l in ll {
                let toks = l.tokens(&cs.forms)?;
                let mut c = Cursor::new(&toks, l.no, l.end());
                let key = c.ident("`theta` or `vertical`")?;
                match key.as_str() {
                    "theta" => {
                        c.expect(&Tok::Eq, "`=`")?;
                        let f = c.form(&fsc, Some(cs.top))?;
                        let t: Vec<_> = f.coords().collect();
                        match t.as_slice() {
                            [(w, a)] => theta = Some(((*w).clone(), a.as_scalar().ok_or_else(|| c.err("a scalar multiple of a top form"))?)),
                            _ => return Err(ParseError::new(l.no, l.col, "a scalar multiple of one top form")),
                        }
                    }
                    "vertical" => {
                        let e = c.form_word(&fsc)?;
                        if e.len() >= cs.top {
                            return Err(ParseError::new(l.no, l.col, "a basis form below the top degree"));
                        }
                        c.expect(&Tok::Eq, "`=`")?;
                        let h = hom_literal(&mut c, &fsc, cs.top - e.len())?;
                        verticals[e.len()].insert(e, h);
                    }
                    _ => return Err(ParseError::new(l.no, l.col, "`theta` or `vertical`")),
                }
                c.finish()?;
            }
            let theta = theta.ok_or_else(|| ParseError::new(ll.last().map_or(1, |l| l.no), 1, "a line `theta = ...`"))?;
            pf.ladder = Some(LadderDiagram { verticals, theta });
        }

        if let Some(sl) = secs.get("sphere") {
            let mut plus = None;
            let mut minus = None;
            for l in sl {
                let toks = l.tokens(&[])?;
                let mut c = Cursor::new(&toks, l.no, l.end());
                c.expect(&Tok::Ident("sweedler".into()), "`sweedler`")?;
                let g = c.ident("`alpha` or `delta`")?;
                c.expect(&Tok::Caret, "`^2`")?;
                if c.int()? != 2 {
                    return Err(ParseError::new(l.no, l.col, "`^2`"));
                }
                c.expect(&Tok::Eq, "`=`")?;
                let t = c.tensor(&sc)?;
                match g.as_str() {
                    "alpha" => plus = Some(t),
                    "delta" => minus = Some(t),
                    _ => return Err(ParseError::new(l.no, l.col, "`alpha` or `delta`")),
                }
                c.finish()?;
            }
            let last = sl.last().map_or(1, |l| l.no);
            pf.sphere = Some(SphereSpec {
                sweedler_alpha2: plus.ok_or_else(|| ParseError::new(last, 1, "`sweedler alpha^2 = ...`"))?,
                sweedler_delta2: minus.ok_or_else(|| ParseError::new(last, 1, "`sweedler delta^2 = ...`"))?,
            });
        }

        if let Some(ml) = secs.get("matrix") {
            let mut n = None;
            let mut basis = None;
            for l in ml {
                let toks = l.tokens(&[])?;
                let mut c = Cursor::new(&toks, l.no, l.end());
                let key = c.ident("`n` or `basis`")?;
                c.expect(&Tok::Eq, "`=`")?;
                match key.as_str() {
                    "n" => n = Some(c.int()?),
                    "basis" => basis = Some(c.ident("`pauli`")?),
                    _ => return Err(ParseError::new(l.no, l.col, "`n` or `basis`")),
                }
                c.finish()?;
            }
            let last = ml.last().map_or(1, |l| l.no);
            if n != Some(2) || basis.as_deref() != Some("pauli") {
                return Err(ParseError::new(last, 1, "`n = 2` with `basis = pauli`"));
            }
            pf.matrix = Some(MatrixSpec { n: 2, basis: "pauli".into() });
        }
        Ok(pf)
    }

    /// Canonical text; parsing it gives back an equal value.
    pub fn to_canonical(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[scalars]\nparams = {}", self.params.join(", "));
        if let Some(a) = &self.algebra {
            let _ = writeln!(s, "\n[algebra]\nname = {}\ngenerators = {}", a.name, a.gens.join(", "));
            for r in &a.rules {
                let rhs = render_terms(r.rhs.iter().map(|(w, c)| (w.render(&a.gens, "*"), c)));
                let _ = writeln!(s, "relation: {} = {}", r.lhs.render(&a.gens, "*"), rhs);
            }
            if let Some(g) = &a.grading {
                let _ = writeln!(s, "\n[grading]");
                for (n, d) in a.gens.iter().zip(g) {
                    let _ = writeln!(s, "{n} = {d}");
                }
            }
        }
        let gens = self.algebra.as_ref().map(|a| a.gens.clone()).unwrap_or_default();
        if let Some(h) = &self.hopf {
            let _ = writeln!(s, "\n[hopf]");
            for (g, name) in gens.iter().enumerate() {
                let _ = writeln!(s, "coproduct {name} = {}", h.coproduct[g].render(&gens));
                let _ = writeln!(s, "counit {name} = {}", scalar_text(&h.counit[g]));
                let _ = writeln!(s, "antipode {name} = {}", h.antipode[g].render(&gens));
                let _ = writeln!(s, "antipode_inv {name} = {}", h.antipode_inv[g].render(&gens));
            }
        }
        if let Some(d) = &self.derivation {
            let _ = writeln!(s, "\n[derivation]\nn = {}", d.n);
            for (g, row) in d.partials.iter().enumerate() {
                let _ = writeln!(s, "partial {} = {}", gens[g], row.iter().map(|a| a.render(&gens)).collect::<Vec<_>>().join(", "));
            }
            match &d.sigma {
                SigmaDesc::Diagonal(v) => {
                    let _ = writeln!(s, "sigma = diag({})", v.iter().map(|m| map_text(m, &gens)).collect::<Vec<_>>().join(", "));
                }
                SigmaDesc::Matrix(rows) => {
                    for (g, e) in rows.iter().enumerate() {
                        let body: Vec<String> = e.chunks(d.n).map(|r| r.iter().map(|a| a.render(&gens)).collect::<Vec<_>>().join(", ")).collect();
                        let _ = writeln!(s, "sigma {} = [{}]", gens[g], body.join("; "));
                    }
                }
            }
            if let Some(inv) = &d.inverses {
                let _ = writeln!(s, "inverses = {}", inv.iter().map(|m| map_text(m, &gens)).collect::<Vec<_>>().join(", "));
            }
        }
        if let Some(c) = &self.calculus {
            let _ = writeln!(s, "\n[calculus]\nforms = {}\ntop = {}\n\n[forms]", c.forms.join(", "), c.top);
            let fw = |w: &Word| if w.is_empty() { "1".to_string() } else { w.render(&c.forms, ".") };
            for (k, b) in c.higher_basis.iter().enumerate() {
                let _ = writeln!(s, "form_basis.{} = [{}]", k + 2, b.iter().map(fw).collect::<Vec<_>>().join(", "));
            }
            for r in &c.rules {
                let _ = writeln!(s, "{} -> {}", fw(&r.lhs), render_terms(r.rhs.iter().map(|(w, k)| (fw(w), k))));
            }
            for (i, d) in c.d_forms.iter().enumerate() {
                if !d.is_zero() {
                    let _ = writeln!(s, "d {} = {}", c.forms[i], form_text(d, &gens, &c.forms));
                }
            }
            if let Some(l) = &self.ladder {
                let _ = writeln!(s, "\n[ladder]\ntheta = {}", render_terms([(fw(&l.theta.0), &l.theta.1)]));
                for v in &l.verticals {
                    for (e, h) in v {
                        let _ = writeln!(s, "vertical {} = {}", fw(e), hom_text(h, &gens, &c.forms));
                    }
                }
            }
        }
        if let Some(sp) = &self.sphere {
            let _ = writeln!(s, "\n[sphere]\nsweedler alpha^2 = {}\nsweedler delta^2 = {}", sp.sweedler_alpha2.render(&gens), sp.sweedler_delta2.render(&gens));
        }
        if let Some(m) = &self.matrix {
            let _ = writeln!(s, "\n[matrix]\nn = {}\nbasis = {}", m.n, m.basis);
        }
        s
    }

    pub fn presentation(&self) -> Result<Arc<Presentation>, LoadError> {
        let a = self.algebra.as_ref().ok_or(LoadError::Missing("[algebra]"))?;
        let mut p = Presentation::new(a.name.clone(), a.gens.clone(), a.rules.clone(), a.grading.clone())?;
        if let Some(h) = &self.hopf {
            p = p.with_hopf(h.clone());
        }
        Ok(Arc::new(p))
    }

    pub fn derivation(&self) -> Result<TwistedMultiDerivation, LoadError> {
        let pres = self.presentation()?;
        let d = self.derivation.as_ref().ok_or(LoadError::Missing("[derivation]"))?;
        self.derivation_with(pres, d)
    }

    pub fn derivation_with(&self, pres: Arc<Presentation>, d: &DerivationSpec) -> Result<TwistedMultiDerivation, LoadError> {
        let sigma = match &d.sigma {
            SigmaDesc::Diagonal(v) => MapMatrix::diagonal(v.iter().map(MapDesc::to_expr).collect()).assume_multiplicative(),
            SigmaDesc::Matrix(rows) => MapMatrix::from_algebra_map(Arc::new(MatrixAlgebraMap::new(d.n, rows.clone())?)),
        };
        let inv = d.inverses.as_ref().map(|v| v.iter().map(MapDesc::to_expr).collect());
        Ok(TwistedMultiDerivation::new(pres, d.partials.clone(), sigma, None, None, inv)?)
    }

    pub fn calculus(&self) -> Result<Calculus, LoadError> {
        let tmd = Arc::new(self.derivation()?);
        let c = self.calculus.as_ref().ok_or(LoadError::Missing("[calculus]"))?;
        let mut basis = vec![(0..c.forms.len()).map(Word::letter).collect::<Vec<_>>()];
        basis.extend(c.higher_basis.iter().cloned());
        Ok(Calculus::new(tmd, c.forms.clone(), c.rules.clone(), basis, c.top, c.d_forms.clone())?)
    }

    pub fn connection(&self) -> Result<HomConnection, LoadError> {
        Ok(HomConnection::new(Arc::new(self.calculus()?)))
    }

    pub fn ladder(&self) -> Result<&LadderDiagram, LoadError> {
        self.ladder.as_ref().ok_or(LoadError::Missing("[ladder]"))
    }

    pub fn sphere(&self) -> Result<crate::descent::Sphere, LoadError> {
        let sp = self.sphere.as_ref().ok_or(LoadError::Missing("[sphere]"))?;
        let conn = self.connection()?;
        let pairs = |t: &TensorElement| t.terms().map(|((u, v), c)| (AlgElement::term(u.clone(), c.clone()), AlgElement::word(v.clone()))).collect();
        Ok(crate::descent::Sphere::new(conn, pairs(&sp.sweedler_alpha2), pairs(&sp.sweedler_delta2))?)
    }

    pub fn matrix(&self) -> Result<MatrixCalculus, LoadError> {
        self.matrix.as_ref().ok_or(LoadError::Missing("[matrix]"))?;
        Ok(MatrixCalculus::new(DerBasis::pauli()))
    }
}

/// `form_word := element; ...` for a hom-form of the given degree.
pub fn hom_literal(c: &mut Cursor, sc: &Scope, degree: usize) -> Result<HomForm, ParseError> {
    let mut h = HomForm::zero(degree);
    if let Some(Tok::Num(n)) = c.peek() {
        if *n == 0.into() {
            c.next();
            return Ok(h);
        }
    }
    loop {
        let col = c.col();
        let e = c.form_word(sc)?;
        if e.len() != degree {
            return Err(ParseError::new(c.line(), col, &format!("a form word of degree {degree}")));
        }
        c.expect(&Tok::Assign, "`:=`")?;
        let a = c.element(sc)?;
        let v = h.value(&e).plus(&a);
        h.set(e, v);
        if !c.eat(&Tok::Semi) {
            return Ok(h);
        }
    }
}

/// Parses a standalone hom-form literal against a loaded file.
pub fn parse_hom(pf: &PresentationFile, text: &str) -> Result<HomForm, ParseError> {
    let cs = pf.calculus.as_ref().ok_or_else(|| ParseError::new(1, 1, "a preset with a [calculus] section"))?;
    let pres = pf.presentation().map_err(|e| ParseError::new(1, 1, &e.to_string()))?;
    let gens = pres.gens().to_vec();
    let sc = Scope { params: &pf.params, gens: &gens, forms: &cs.forms, pres: Some(&pres) };
    let toks = lex(text, 1, 1, &cs.forms)?;
    let mut c = Cursor::new(&toks, 1, text.chars().count() + 1);
    // the degree is read off the first form word
    let degree = {
        let mut probe = Cursor::new(&toks, 1, text.chars().count() + 1);
        probe.form_word(&sc)?.len()
    };
    let h = hom_literal(&mut c, &sc, degree)?;
    c.finish()?;
    Ok(h)
}

/// Parses an algebra element against a loaded file.
pub fn parse_element(pf: &PresentationFile, pres: &Presentation, text: &str) -> Result<AlgElement, ParseError> {
    let gens = pres.gens().to_vec();
    let sc = Scope { params: &pf.params, gens: &gens, forms: &[], pres: Some(pres) };
    let toks = lex(text, 1, 1, &[])?;
    let mut c = Cursor::new(&toks, 1, text.chars().count() + 1);
    let a = c.element(&sc)?;
    c.finish()?;
    Ok(a)
}

fn scalar_text(c: &ScalarRF) -> String {
    render_terms([("1".to_string(), c)])
}

fn map_text(m: &MapDesc, gens: &[String]) -> String {
    match m {
        MapDesc::Zero => "0".into(),
        MapDesc::Identity => "id".into(),
        MapDesc::Grade(b, e) => format!("grade({}, {e})", scalar_text(b)),
        MapDesc::Images(v) => format!("map({})", gens.iter().zip(v).map(|(g, a)| format!("{g}: {}", a.render(gens))).collect::<Vec<_>>().join(", ")),
    }
}

fn form_text(f: &FormElement, gens: &[String], forms: &[String]) -> String {
    let mut parts = Vec::new();
    for (e, a) in f.coords() {
        for (w, c) in a.terms() {
            let label = if w.is_empty() { e.render(forms, ".") } else { format!("{}*{}", w.render(gens, "*"), e.render(forms, ".")) };
            parts.push((label, c.clone()));
        }
    }
    render_terms(parts.iter().map(|(l, c)| (l.clone(), c)))
}

fn hom_text(h: &HomForm, gens: &[String], forms: &[String]) -> String {
    let parts: Vec<String> = h.values().map(|(e, a)| format!("{} := {}", if e.is_empty() { "1".into() } else { e.render(forms, ".") }, a.render(gens))).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("; ")
    }
}
