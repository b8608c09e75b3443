//! Line-oriented witness certificates.
//!
//! ```text
//! <kind> <k> <r> <epsilon>
//! point <rational> color <int>
//! ...
//! param <name> <value>
//! ...
//! ```
//!
//! Every line ends with `\n`, fields are separated by exactly one space and
//! rationals are reduced `n/d` (or `n` when `d = 1`). A certificate is
//! accepted by [`WitnessCertificate::parse`] only in the canonical form
//! produced by its `Display` impl, so equal claims serialize to equal
//! bytes.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::coloring::{Color, ColoringSpec};
use crate::exactnum::Rational;
use crate::phj::{Alphabet, PhjPoint, PhjWitness};
use crate::pipelines::{
    ap_points, dedup_in_order, f_encode, geo_points, poly_points, ApWitness, GeoWitness, PipelineError, PolyWitness,
    Polynomial, SigmaEncoder,
};
use crate::words::{bm_generated_set, Block, BmWitness, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    Ap,
    Geo,
    Poly,
    Bm,
    Phj,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::Ap => "ap",
            CertificateKind::Geo => "geo",
            CertificateKind::Poly => "poly",
            CertificateKind::Bm => "bm",
            CertificateKind::Phj => "phj",
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CertificateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ap" => CertificateKind::Ap,
            "geo" => CertificateKind::Geo,
            "poly" => CertificateKind::Poly,
            "bm" => CertificateKind::Bm,
            "phj" => CertificateKind::Phj,
            _ => return Err(format!("unknown certificate kind `{s}`")),
        })
    }
}

/// The witness a certificate claims, with whatever encoding parameters are
/// needed to turn it into points of `(0, ε)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Ap(ApWitness),
    Geo(GeoWitness),
    Poly(PolyWitness),
    /// Points are `f(w)` for the generated words.
    Bm {
        witness: BmWitness,
        p: u64,
        m: u64,
    },
    /// Points are `σ(u) = r + Σ u` for the generated points.
    Phj {
        witness: PhjWitness,
        r: Rational,
    },
}

impl Witness {
    pub fn kind(&self) -> CertificateKind {
        match self {
            Witness::Ap(_) => CertificateKind::Ap,
            Witness::Geo(_) => CertificateKind::Geo,
            Witness::Poly(_) => CertificateKind::Poly,
            Witness::Bm { .. } => CertificateKind::Bm,
            Witness::Phj { .. } => CertificateKind::Phj,
        }
    }

    /// The header's `k`: progression length parameter for `ap`, `geo` and
    /// `bm`, number of polynomials for `poly`, degree for `phj`.
    pub fn k(&self) -> usize {
        match self {
            Witness::Ap(w) => w.k,
            Witness::Geo(w) => w.k,
            Witness::Poly(w) => w.polys.len(),
            Witness::Bm { witness, .. } => witness.k() as usize,
            Witness::Phj { witness, .. } => witness.base.degree(),
        }
    }

    fn color(&self) -> Color {
        match self {
            Witness::Ap(w) => w.color,
            Witness::Geo(w) => w.color,
            Witness::Poly(w) => w.color,
            Witness::Bm { witness, .. } => witness.color,
            Witness::Phj { witness, .. } => witness.color,
        }
    }

    fn set_color(&mut self, color: Color) {
        match self {
            Witness::Ap(w) => w.color = color,
            Witness::Geo(w) => w.color = color,
            Witness::Poly(w) => w.color = color,
            Witness::Bm { witness, .. } => witness.color = color,
            Witness::Phj { witness, .. } => witness.color = color,
        }
    }

    /// The configuration in `(0, ε)`, in listing order with repeats
    /// removed. Fails when the witness is structurally invalid or its
    /// encoding parameters violate their bounds.
    pub fn regenerate(&self, epsilon: &Rational) -> Result<Vec<Rational>, PipelineError> {
        Ok(match self {
            Witness::Ap(w) => ap_points(&w.a, &w.d, w.k),
            Witness::Geo(w) => geo_points(&w.b, &w.a, &w.d, w.k),
            Witness::Poly(w) => poly_points(&w.a, &w.alpha, &w.polys),
            Witness::Bm { witness, p, m } => {
                let words = bm_generated_set(&witness.word, &witness.blocks)?;
                let mut out = Vec::with_capacity(words.len());
                for w in &words {
                    out.push(f_encode(w, *p, *m, epsilon)?);
                }
                dedup_in_order(out)
            }
            Witness::Phj { witness, r } => {
                let base = &witness.base;
                let encoder = SigmaEncoder::new(&witness.alphabet, base.degree(), base.n(), r.clone(), epsilon)?;
                let points = witness.generated_set()?;
                let mut out = Vec::with_capacity(points.len());
                for u in &points {
                    out.push(encoder.encode(u)?);
                }
                dedup_in_order(out)
            }
        })
    }

    fn write_params(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Ap(w) => {
                writeln!(f, "param a {}", w.a)?;
                writeln!(f, "param d {}", w.d)
            }
            Witness::Geo(w) => {
                writeln!(f, "param B {}", w.b)?;
                writeln!(f, "param A {}", w.a)?;
                writeln!(f, "param D {}", w.d)
            }
            Witness::Poly(w) => {
                for p in &w.polys {
                    writeln!(f, "param poly {p}")?;
                }
                writeln!(f, "param a {}", w.a)?;
                writeln!(f, "param alpha {}", w.alpha)
            }
            Witness::Bm { witness, p, m } => {
                writeln!(f, "param P {p}")?;
                writeln!(f, "param M {m}")?;
                writeln!(f, "param word {}", witness.word)?;
                for b in &witness.blocks {
                    writeln!(f, "param block {b}")?;
                }
                Ok(())
            }
            Witness::Phj { witness, r } => {
                writeln!(f, "param r {r}")?;
                writeln!(f, "param N {}", witness.base.n())?;
                writeln!(f, "param gamma {}", join(&witness.gamma))?;
                writeln!(f, "param alphabet {}", join(witness.alphabet.entries()))?;
                for (j, tuple, x) in witness.base.nonzero_entries() {
                    writeln!(f, "param entry {j} {} {x}", join(&tuple))?;
                }
                Ok(())
            }
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub epsilon: Rational,
    /// Palette size of the coloring the claim was made against.
    pub colors: u32,
    pub witness: Witness,
    /// Listed points with their claimed colors.
    pub points: Vec<(Rational, Color)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("certificate line {line}: {message}")]
pub struct CertificateError {
    pub line: usize,
    pub message: String,
}

/// The first reason a certificate fails to verify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyFailure {
    Palette {
        claimed: u32,
        actual: u32,
    },
    Epsilon(Rational),
    Invalid(String),
    Empty,
    OutOfRange {
        index: usize,
        point: Rational,
    },
    Regenerated {
        index: usize,
        listed: Option<Rational>,
        expected: Option<Rational>,
    },
    ClaimedColor {
        index: usize,
        point: Rational,
        claimed: Color,
        actual: Color,
    },
    NotMonochromatic {
        index: usize,
        point: Rational,
        color: Color,
        first: Color,
    },
}

fn show(x: &Option<Rational>) -> String {
    x.as_ref().map_or_else(|| "(nothing)".to_string(), Rational::to_string)
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::Palette { claimed, actual } => {
                write!(f, "header claims {claimed} colors, the coloring has {actual}")
            }
            VerifyFailure::Epsilon(e) => write!(f, "epsilon {e} is not in (0, 1)"),
            VerifyFailure::Invalid(msg) => write!(f, "witness parameters are invalid: {msg}"),
            VerifyFailure::Empty => f.write_str("certificate lists no points"),
            VerifyFailure::OutOfRange { index, point } => {
                write!(
                    f,
                    "point #{index}\n- listed:   {point}\n+ required: inside (0, epsilon)"
                )
            }
            VerifyFailure::Regenerated {
                index,
                listed,
                expected,
            } => write!(
                f,
                "point #{index}\n- listed:      {}\n+ regenerated: {}",
                show(listed),
                show(expected)
            ),
            VerifyFailure::ClaimedColor {
                index,
                point,
                claimed,
                actual,
            } => write!(
                f,
                "point #{index} = {point}\n- claimed color: {claimed}\n+ actual color:  {actual}"
            ),
            VerifyFailure::NotMonochromatic {
                index,
                point,
                color,
                first,
            } => write!(
                f,
                "point #{index} = {point}\n- expected color: {first}\n+ actual color:   {color}"
            ),
        }
    }
}

impl WitnessCertificate {
    /// Builds the certificate of a witness: lists the regenerated points,
    /// each claiming the witness color.
    pub fn new(witness: Witness, spec: &ColoringSpec, epsilon: &Rational) -> Result<Self, PipelineError> {
        let color = witness.color();
        let points = witness.regenerate(epsilon)?.into_iter().map(|p| (p, color)).collect();
        Ok(WitnessCertificate {
            epsilon: epsilon.clone(),
            colors: spec.colors(),
            witness,
            points,
        })
    }

    pub fn kind(&self) -> CertificateKind {
        self.witness.kind()
    }

    /// Checks the palette, then point by point: range, exact regeneration,
    /// claimed color and agreement with the first point's color. Returns
    /// the shared color.
    #[allow(clippy::result_large_err)]
    pub fn verify(&self, spec: &ColoringSpec) -> Result<Color, VerifyFailure> {
        if self.colors != spec.colors() {
            return Err(VerifyFailure::Palette {
                claimed: self.colors,
                actual: spec.colors(),
            });
        }
        let zero = Rational::zero();
        if !self.epsilon.in_open_interval(&zero, &Rational::one()) {
            return Err(VerifyFailure::Epsilon(self.epsilon.clone()));
        }
        let expected = self
            .witness
            .regenerate(&self.epsilon)
            .map_err(|e| VerifyFailure::Invalid(e.to_string()))?;
        if self.points.is_empty() {
            return Err(VerifyFailure::Empty);
        }
        let mut first = None;
        for index in 0..self.points.len().max(expected.len()) {
            let listed = self.points.get(index);
            let want = expected.get(index);
            if let Some((point, _)) = listed {
                if !point.in_open_interval(&zero, &self.epsilon) {
                    return Err(VerifyFailure::OutOfRange {
                        index,
                        point: point.clone(),
                    });
                }
            }
            if listed.map(|(p, _)| p) != want {
                return Err(VerifyFailure::Regenerated {
                    index,
                    listed: listed.map(|(p, _)| p.clone()),
                    expected: want.cloned(),
                });
            }
            let (point, claimed) = listed.expect("equal to a regenerated point");
            let actual = spec.color_of(point).expect("points in (0, epsilon) are positive");
            if actual != *claimed {
                return Err(VerifyFailure::ClaimedColor {
                    index,
                    point: point.clone(),
                    claimed: *claimed,
                    actual,
                });
            }
            match first {
                None => first = Some(actual),
                Some(c) if c != actual => {
                    return Err(VerifyFailure::NotMonochromatic {
                        index,
                        point: point.clone(),
                        color: actual,
                        first: c,
                    })
                }
                Some(_) => {}
            }
        }
        Ok(first.expect("at least one point"))
    }

    pub fn parse(text: &str) -> Result<Self, CertificateError> {
        let cert = parse_lenient(text)?;
        let canonical = cert.to_string();
        if canonical != text {
            let line = canonical
                .lines()
                .zip(text.lines())
                .position(|(a, b)| a != b)
                .unwrap_or_else(|| canonical.lines().count().min(text.lines().count()))
                + 1;
            return Err(CertificateError {
                line,
                message: "not in canonical form".into(),
            });
        }
        Ok(cert)
    }
}

impl fmt::Display for WitnessCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {} {} {}",
            self.kind(),
            self.witness.k(),
            self.colors,
            self.epsilon
        )?;
        for (p, c) in &self.points {
            writeln!(f, "point {p} color {c}")?;
        }
        self.witness.write_params(f)
    }
}

impl FromStr for WitnessCertificate {
    type Err = CertificateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WitnessCertificate::parse(s)
    }
}

struct Params<'a> {
    items: Vec<(usize, &'a str, &'a str)>,
    next: usize,
    end_line: usize,
}

impl<'a> Params<'a> {
    fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, CertificateError> {
        Err(CertificateError {
            line,
            message: message.into(),
        })
    }

    fn take(&mut self, name: &str) -> Result<(usize, &'a str), CertificateError> {
        match self.items.get(self.next) {
            Some(&(line, n, v)) if n == name => {
                self.next += 1;
                Ok((line, v))
            }
            Some(&(line, n, _)) => Self::fail(line, format!("expected param `{name}`, found `{n}`")),
            None => Self::fail(self.end_line, format!("missing param `{name}`")),
        }
    }

    fn take_all(&mut self, name: &str) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        while let Some(&(line, n, v)) = self.items.get(self.next) {
            if n != name {
                break;
            }
            out.push((line, v));
            self.next += 1;
        }
        out
    }

    fn value<T: FromStr>(&mut self, name: &str) -> Result<T, CertificateError>
    where
        T::Err: fmt::Display,
    {
        let (line, v) = self.take(name)?;
        parse_at(line, v)
    }

    fn finish(&self) -> Result<(), CertificateError> {
        match self.items.get(self.next) {
            Some(&(line, n, _)) => Self::fail(line, format!("unexpected param `{n}`")),
            None => Ok(()),
        }
    }
}

fn parse_at<T: FromStr>(line: usize, v: &str) -> Result<T, CertificateError>
where
    T::Err: fmt::Display,
{
    v.parse().map_err(|e: T::Err| CertificateError {
        line,
        message: format!("bad value `{v}`: {e}"),
    })
}

fn list_at<T: FromStr>(line: usize, v: &str) -> Result<Vec<T>, CertificateError>
where
    T::Err: fmt::Display,
{
    v.split(',').map(|x| parse_at(line, x)).collect()
}

fn at_line<T, E: fmt::Display>(line: usize, r: Result<T, E>) -> Result<T, CertificateError> {
    r.map_err(|e| CertificateError {
        line,
        message: e.to_string(),
    })
}

fn parse_lenient(text: &str) -> Result<WitnessCertificate, CertificateError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let Some((_, header)) = lines.next() else {
        return Params::fail(1, "empty certificate");
    };
    let fields: Vec<&str> = header.split(' ').collect();
    let [kind, k, colors, epsilon] = fields[..] else {
        return Params::fail(1, "header must be `kind k r epsilon`");
    };
    let kind: CertificateKind = parse_at(1, kind)?;
    let k: usize = parse_at(1, k)?;
    let colors: u32 = parse_at(1, colors)?;
    let epsilon: Rational = parse_at(1, epsilon)?;

    let mut points = Vec::new();
    let mut params = Params {
        items: Vec::new(),
        next: 0,
        end_line: text.lines().count() + 1,
    };
    for (line, l) in lines {
        if let Some(rest) = l.strip_prefix("point ") {
            if !params.items.is_empty() {
                return Params::fail(line, "point lines must precede param lines");
            }
            let Some((p, c)) = rest.split_once(" color ") else {
                return Params::fail(line, "expected `point <rational> color <int>`");
            };
            points.push((parse_at::<Rational>(line, p)?, parse_at::<Color>(line, c)?));
        } else if let Some(rest) = l.strip_prefix("param ") {
            let Some((name, value)) = rest.split_once(' ') else {
                return Params::fail(line, "expected `param <name> <value>`");
            };
            params.items.push((line, name, value));
        } else {
            return Params::fail(line, "expected a `point` or `param` line");
        }
    }
    let color = points.first().map_or(0, |p| p.1);

    let mut witness = match kind {
        CertificateKind::Ap => Witness::Ap(ApWitness {
            a: params.value("a")?,
            d: params.value("d")?,
            k,
            color,
        }),
        CertificateKind::Geo => Witness::Geo(GeoWitness {
            b: params.value("B")?,
            a: params.value("A")?,
            d: params.value("D")?,
            k,
            color,
        }),
        CertificateKind::Poly => {
            let polys = params
                .take_all("poly")
                .into_iter()
                .map(|(line, v)| parse_at::<Polynomial>(line, v))
                .collect::<Result<Vec<_>, _>>()?;
            if polys.len() != k {
                return Params::fail(1, format!("header k = {k} but {} polynomials are listed", polys.len()));
            }
            Witness::Poly(PolyWitness {
                polys,
                a: params.value("a")?,
                alpha: params.value("alpha")?,
                color,
            })
        }
        CertificateKind::Bm => {
            let k8 = at_line(1, u8::try_from(k))?;
            let p = params.value("P")?;
            let m = params.value("M")?;
            let (line, w) = params.take("word")?;
            let word = at_line(line, Word::parse(k8, w))?;
            let blocks = params
                .take_all("block")
                .into_iter()
                .map(|(line, v)| at_line(line, Block::new(list_at(line, v)?)))
                .collect::<Result<Vec<_>, _>>()?;
            Witness::Bm {
                witness: BmWitness { word, blocks, color },
                p,
                m,
            }
        }
        CertificateKind::Phj => {
            let r = params.value("r")?;
            let n: usize = params.value("N")?;
            let (line, g) = params.take("gamma")?;
            let gamma = list_at(line, g)?;
            let (line, a) = params.take("alphabet")?;
            let alphabet = at_line(line, Alphabet::new(list_at(line, a)?))?;
            let mut base = PhjPoint::zero(k, n);
            for (line, v) in params.take_all("entry") {
                let parts: Vec<&str> = v.split(' ').collect();
                let [j, tuple, x] = parts[..] else {
                    return Params::fail(line, "expected `entry <j> <i1,...,ij> <rational>`");
                };
                let j: usize = parse_at(line, j)?;
                let tuple: Vec<usize> = list_at(line, tuple)?;
                at_line(line, base.set(j, &tuple, parse_at(line, x)?))?;
            }
            Witness::Phj {
                witness: PhjWitness {
                    base,
                    gamma,
                    alphabet,
                    color,
                },
                r,
            }
        }
    };
    params.finish()?;
    witness.set_color(color);
    Ok(WitnessCertificate {
        epsilon,
        colors,
        witness,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::parse_coloring;
    use crate::engine::SearchBudget;
    use crate::pipelines::{ap_near_zero, geo_arith_near_zero, parse_polynomials, poly_vdw_near_zero};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn budget() -> SearchBudget {
        SearchBudget::default().with_workers(1).with_max_n(8)
    }

    fn all_kinds(spec: &ColoringSpec, eps: &Rational) -> Vec<WitnessCertificate> {
        let ap = ap_near_zero(spec, 2, eps, &budget()).unwrap().found().unwrap();
        let geo = geo_arith_near_zero(spec, 1, eps, &budget()).unwrap().found().unwrap();
        let polys = parse_polynomials("x, x^2").unwrap();
        let poly = poly_vdw_near_zero(&polys, spec, eps, &budget())
            .unwrap()
            .found()
            .unwrap();
        [
            Witness::Ap(ap),
            Witness::Geo(geo.witness),
            Witness::Bm {
                witness: geo.bm,
                p: geo.p,
                m: geo.m,
            },
            Witness::Poly(poly.witness),
            Witness::Phj {
                witness: poly.phj,
                r: poly.r,
            },
        ]
        .into_iter()
        .map(|w| WitnessCertificate::new(w, spec, eps).unwrap())
        .collect()
    }

    #[test]
    fn ap_certificate_text() {
        let spec = parse_coloring("constant:1").unwrap();
        let eps = q("1/2");
        let wit = ap_near_zero(&spec, 2, &eps, &budget()).unwrap().found().unwrap();
        let cert = WitnessCertificate::new(Witness::Ap(wit), &spec, &eps).unwrap();
        let text = cert.to_string();
        assert_eq!(
            text,
            "ap 2 1 1/2\npoint 1/7 color 1\npoint 2/7 color 1\npoint 3/7 color 1\nparam a 1/7\nparam d 1/7\n"
        );
        assert_eq!(WitnessCertificate::parse(&text).unwrap(), cert);
    }

    #[test]
    fn round_trip_every_kind() {
        let eps = q("1/2");
        for text in ["constant:1", "modsum:2", "threshold:1/4"] {
            let spec = parse_coloring(text).unwrap();
            for cert in all_kinds(&spec, &eps) {
                let s = cert.to_string();
                let back = WitnessCertificate::parse(&s).unwrap_or_else(|e| panic!("{e}\n{s}"));
                assert_eq!(back, cert);
                assert!(back.verify(&spec).is_ok(), "{text}\n{s}");
            }
        }
    }

    #[test]
    fn tampering_is_caught() {
        let spec = parse_coloring("constant:1").unwrap();
        let eps = q("1/2");
        let cert = &all_kinds(&spec, &eps)[0];

        let mut out = cert.clone();
        out.points[1].0 = q("3/2");
        assert!(matches!(
            out.verify(&spec),
            Err(VerifyFailure::OutOfRange { index: 1, .. })
        ));

        let mut moved = cert.clone();
        moved.points[1].0 = q("2/5");
        let err = moved.verify(&spec).unwrap_err();
        assert!(matches!(err, VerifyFailure::Regenerated { index: 1, .. }));
        assert!(err.to_string().contains("2/7"));

        let mut dropped = cert.clone();
        dropped.points.pop();
        assert!(matches!(
            dropped.verify(&spec),
            Err(VerifyFailure::Regenerated {
                index: 2,
                listed: None,
                ..
            })
        ));

        let mut claim = cert.clone();
        claim.points[0].1 = 2;
        assert!(matches!(
            claim.verify(&spec),
            Err(VerifyFailure::ClaimedColor { index: 0, .. })
        ));

        let other = parse_coloring("constant:2").unwrap();
        assert!(matches!(cert.verify(&other), Err(VerifyFailure::Palette { .. })));
    }

    #[test]
    fn diverging_coloring_is_caught() {
        let spec = parse_coloring("constant:2").unwrap();
        let eps = q("1/2");
        let cert = &all_kinds(&spec, &eps)[0];
        // same palette, differs from constant:2 on 3/7 only
        let other = parse_coloring("interval:2:2/5").unwrap();
        let mut cert = cert.clone();
        for p in &mut cert.points {
            p.1 = 1;
        }
        assert!(cert.verify(&parse_coloring("constant:1").unwrap()).is_err());
        cert.points[2].1 = 2;
        let failure = cert.verify(&other).unwrap_err();
        assert_eq!(
            failure,
            VerifyFailure::NotMonochromatic {
                index: 2,
                point: q("3/7"),
                color: 2,
                first: 1
            }
        );
        let mut claims = cert.clone();
        claims.points[2].1 = 1;
        assert!(matches!(
            claims.verify(&other),
            Err(VerifyFailure::ClaimedColor { index: 2, .. })
        ));
        let failure = claims.verify(&other).unwrap_err();
        assert!(failure.to_string().contains("3/7"), "{failure}");
    }

    #[test]
    fn rejects_malformed_text() {
        let good = "ap 2 1 1/2\npoint 1/7 color 1\npoint 2/7 color 1\npoint 3/7 color 1\nparam a 1/7\nparam d 1/7\n";
        for (bad, line) in [
            ("", 1),
            ("ap 2 1\n", 1),
            ("zz 2 1 1/2\n", 1),
            ("ap 2 1 1/2\npoint 1/7 colour 1\n", 2),
            ("ap 2 1 1/2\npoint 1/7 color 1\nparam a 1/7\n", 4),
            ("ap 2 1 1/2\nparam a 1/7\nparam d 1/7\npoint 1/7 color 1\n", 4),
            ("ap 2 1 1/2\npoint 2/14 color 1\nparam a 1/7\nparam d 1/7\n", 2),
            ("ap 2 1 1/2\nparam a 1/7\nparam d 1/7\nparam x 1\n", 4),
            ("ap 2 1 1/2\nparam a 1/7\nparam  d 1/7\n", 3),
        ] {
            let e = WitnessCertificate::parse(bad).unwrap_err();
            assert_eq!(e.line, line, "{bad:?}: {e}");
        }
        // trailing newline is part of the canonical form
        assert!(WitnessCertificate::parse(good.trim_end()).is_err());
        assert!(WitnessCertificate::parse(good).is_ok());
    }

    #[test]
    fn structural_lies_fail_verification() {
        let spec = parse_coloring("constant:1").unwrap();
        let eps = q("1/2");
        let certs = all_kinds(&spec, &eps);
        let mut bm = certs[2].clone();
        if let Witness::Bm { p, .. } = &mut bm.witness {
            *p = 2;
        }
        assert!(matches!(bm.verify(&spec), Err(VerifyFailure::Invalid(_))));
        let mut phj = certs[4].clone();
        if let Witness::Phj { r, .. } = &mut phj.witness {
            *r = q("1/4");
        }
        assert!(matches!(phj.verify(&spec), Err(VerifyFailure::Invalid(_))));
    }
}
