//! The subcommands. Each returns a report and an exit status; documents go to
//! the report verbatim.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use ionad::construct::{coproduct, cotensor_arrow, product, tensor};
use ionad::fincat::{FinCategory, PointFamily};
use ionad::ionad::probe::{basis_diagrams, cartesianness_probe};
use ionad::ionad::sample::random_family;
use ionad::ionad::{BasisFunctor, FlatnessCondition, FlatnessCounterexample, Ionad};
use ionad::morphism::{check_continuous, compose, hom_category, specialisation_category, ContinuousMap};
use ionad::site::{generate_topology, matching_families, sheaf_check, SheafDefect, Sieve};
use ionad::space::lambda;
use ionad::Budget;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::doc::{self, Body, Document, MapBody};
use crate::error::{CliError, Result, Status};
use crate::model::{canonicalize, Action, Basis, Category, Family, Map, Presheaf, Source, Space};

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub budget: Budget,
    pub seed: u64,
    pub probes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub status: Status,
    pub text: String,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { status: Status::Ok, text }
    }

    fn failed(text: String) -> Self {
        Report {
            status: Status::CheckFailed,
            text,
        }
    }

    fn document(body: Body) -> Self {
        Self::ok(doc::serialize(&Document::new(body)))
    }
}

pub fn read(path: &Path) -> Result<Document> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: name.clone(),
        source,
    })?;
    doc::parse(&name, &text)
}

fn source(path: &Path, opts: &Options) -> Result<Source> {
    Source::from_document(&read(path)?, opts.budget)
}

fn expect_kind(doc: &Document, kind: &str) -> Result<()> {
    if doc.body.kind() == kind {
        Ok(())
    } else {
        Err(CliError::Invalid(format!(
            "expected a {kind} document, found {}",
            doc.body.kind()
        )))
    }
}

fn family(path: &Path, over: &Source) -> Result<PointFamily> {
    let d = read(path)?;
    let Body::Family(body) = &d.body else {
        return Err(CliError::Invalid(format!("expected a family document, found {}", d.body.kind())));
    };
    Family::from_body(body)?.over(&over.points)
}

fn components(points: &[String], comps: &[Vec<usize>]) -> String {
    points
        .iter()
        .zip(comps)
        .map(|(p, c)| format!("{p}:{c:?}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn fibers(points: &[String], family: &PointFamily) -> String {
    points
        .iter()
        .enumerate()
        .map(|(x, p)| format!("{p}:{}", family.size(x)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn sieve_label(shape: &Category, sieve: &Sieve) -> String {
    let members: Vec<&str> = sieve.members.iter().map(|&g| shape.morphisms[g].as_str()).collect();
    format!("{{{}}}", members.join(", "))
}

fn describe_flatness(points: &[String], shape: &Category, ce: &FlatnessCounterexample) -> String {
    let element = |(b, s): (usize, usize)| format!("({}, {s})", shape.objects[b]);
    let what = match &ce.condition {
        FlatnessCondition::Empty => "no elements".to_string(),
        FlatnessCondition::NoCommonSource { first, second } => format!(
            "elements {} and {} have no common source",
            element(*first),
            element(*second)
        ),
        FlatnessCondition::NoEqualizer { element: e, first, second } => format!(
            "morphisms {} and {} out of {} have no equalizing morphism",
            shape.morphisms[*first],
            shape.morphisms[*second],
            element(*e)
        ),
    };
    format!(
        "not flat: at point {}, condition {}: {what}\n",
        points[ce.point],
        ce.condition.label()
    )
}

fn check_flat(points: &[String], shape: &Category, basis: BasisFunctor, budget: Budget) -> Result<std::result::Result<Ionad, String>> {
    match basis.flatness_check() {
        Ok(()) => Ok(Ok(Ionad::new(basis)?.with_budget(budget))),
        Err(ce) => Ok(Err(describe_flatness(points, shape, &ce))),
    }
}

pub fn validate(path: &Path, opts: &Options) -> Result<Report> {
    let d = read(path)?;
    canonicalize(&d)?;
    let summary = match &d.body {
        Body::Category(b) => {
            let c = Category::from_body(b)?;
            format!(
                "valid category: {} objects, {} morphisms",
                c.cat.object_count(),
                c.cat.morphism_count()
            )
        }
        Body::Space(b) => {
            let s = Space::from_body(b)?;
            format!("valid space: {} points, {} opens", s.points.len(), s.space.opens().len())
        }
        Body::Family(b) => format!("valid family over {} points", Family::from_body(b)?.points.len()),
        Body::Basis(b) => {
            let m = Basis::from_body(b)?;
            let flat = match m.basis.flatness_check() {
                Ok(()) => "flat".to_string(),
                Err(ce) => describe_flatness(&m.points, &m.shape, &ce).trim_end().to_string(),
            };
            format!(
                "valid basis: {} points, {} objects, {} morphisms; {flat}",
                m.points.len(),
                m.shape.cat.object_count(),
                m.shape.cat.morphism_count()
            )
        }
        Body::Presheaf(b) => format!(
            "valid presheaf on {} objects",
            Presheaf::from_body(b)?.shape.cat.object_count()
        ),
        Body::GroupAction(b) => {
            let a = Action::from_body(b)?;
            format!(
                "valid group action: group of order {} on {} points",
                a.group.cat.morphism_count(),
                a.space.points.len()
            )
        }
        Body::Map(b) => {
            let m = Map::from_body(b, opts.budget)?;
            format!("valid map: {} points to {} points", m.src.points.len(), m.dst.points.len())
        }
    };
    Ok(Report::ok(summary + "\n"))
}

pub fn flatness(path: &Path, opts: &Options) -> Result<Report> {
    let d = read(path)?;
    let (basis, points, shape) = match &d.body {
        Body::Basis(b) => {
            let m = Basis::from_body(b)?;
            (m.basis, m.points, m.shape)
        }
        _ => {
            let s = Source::from_document(&d, opts.budget)?;
            (s.ionad.basis().clone(), s.points, s.shape)
        }
    };
    let ion = match check_flat(&points, &shape, basis, opts.budget)? {
        Ok(ion) => ion,
        Err(text) => return Ok(Report::failed(text)),
    };
    let mut out = String::from("flat\n");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.probes {
        let a = random_family(&mut rng, ion.points(), 2);
        if let Err(f) = ion.check_comonad_laws(&a)? {
            writeln!(out, "comonad laws fail on fibers {}: {f}", fibers(&points, &a)).unwrap();
            return Ok(Report::failed(out));
        }
    }
    writeln!(out, "comonad laws: ok on {} random families (seed {})", opts.probes, opts.seed).unwrap();
    let diagrams = basis_diagrams(ion.basis());
    if let Err(f) = cartesianness_probe(ion.basis(), &diagrams, &opts.budget)? {
        writeln!(out, "cartesianness probe fails: {f}").unwrap();
        return Ok(Report::failed(out));
    }
    writeln!(out, "cartesianness probe: ok on {} diagrams", diagrams.len()).unwrap();
    Ok(Report::ok(out))
}

pub fn interior(ionad: &Path, fam: &Path, opts: &Options) -> Result<Report> {
    let s = source(ionad, opts)?;
    let a = family(fam, &s)?;
    let ia = s.ionad.interior(&a)?;
    let mut out = format!("interior of {}\n", fibers(&s.points, &a));
    writeln!(out, "fibers {}", fibers(&s.points, ia.carrier())).unwrap();
    for (x, p) in s.points.iter().enumerate() {
        writeln!(out, "point {p}:").unwrap();
        for (c, w) in ia.witnesses(x).iter().enumerate() {
            writeln!(
                out,
                "  {c} = class of ({}, element {}, map {})",
                s.shape.objects[w.object],
                w.element,
                components(&s.points, w.map.components())
            )
            .unwrap();
        }
    }
    Ok(Report::ok(out))
}

pub fn opens_enumerate(ionad: &Path, fam: &Path, opts: &Options) -> Result<Report> {
    let s = source(ionad, opts)?;
    let a = family(fam, &s)?;
    let structures = s.ionad.enumerate_coalgebra_structures(&a)?;
    let mut out = format!(
        "{} coalgebra structures on {}\n",
        structures.len(),
        fibers(&s.points, &a)
    );
    for (i, c) in structures.iter().enumerate() {
        writeln!(out, "structure {i}: {}", components(&s.points, c.structure().components())).unwrap();
    }
    Ok(Report::ok(out))
}

pub fn site(ionad: &Path, opts: &Options) -> Result<Report> {
    let s = source(ionad, opts)?;
    let t = generate_topology(Arc::new(s.ionad.basis().clone()), &opts.budget)?;
    let mut out = String::new();
    for (u, name) in s.shape.objects.iter().enumerate() {
        let covers = t.covers(u);
        writeln!(out, "object {name}: {} covering sieves of {}", covers.len(), t.sieves(u).len()).unwrap();
        for c in covers {
            writeln!(out, "  {}", sieve_label(&s.shape, c)).unwrap();
        }
    }
    Ok(Report::ok(out))
}

pub fn sheaf(ionad: &Path, presheaf: &Path, opts: &Options) -> Result<Report> {
    let s = source(ionad, opts)?;
    let d = read(presheaf)?;
    let Body::Presheaf(body) = &d.body else {
        return Err(CliError::Invalid(format!("expected a presheaf document, found {}", d.body.kind())));
    };
    let p = Presheaf::from_body(body)?.onto(&s.shape)?;
    let t = generate_topology(Arc::new(s.ionad.basis().clone()), &opts.budget)?;
    let unit = s.ionad.unit_is_iso(&p)?;
    let Err(failure) = sheaf_check(&t, &p)? else {
        return Ok(Report::ok(format!(
            "sheaf\nunit P -> R L P is an isomorphism: {}\n",
            if unit { "yes" } else { "no" }
        )));
    };
    let cat = s.ionad.basis().shape();
    let sieve = &failure.sieve;
    let u = sieve.object;
    let restrict = |e: usize| -> Vec<usize> { sieve.members.iter().map(|&g| p.action(g)[e]).collect() };
    let mut out = String::new();
    match failure.defect {
        SheafDefect::NotSeparated => {
            writeln!(out, "not a sheaf: not separated for the covering sieve {} on {}", sieve_label(&s.shape, sieve), s.shape.objects[u]).unwrap();
            let n = p.values()[u];
            if let Some((e1, e2)) = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).find(|&(a, b)| restrict(a) == restrict(b)) {
                writeln!(out, "witness: elements {e1} and {e2} have the same restrictions {:?}", restrict(e1)).unwrap();
            }
        }
        SheafDefect::NoAmalgamation => {
            writeln!(out, "not a sheaf: no amalgamation for the covering sieve {} on {}", sieve_label(&s.shape, sieve), s.shape.objects[u]).unwrap();
            let glued: Vec<Vec<usize>> = (0..p.values()[u]).map(restrict).collect();
            if let Some(fam) = matching_families(cat, &p, sieve).into_iter().find(|f| !glued.contains(f)) {
                writeln!(out, "witness: matching family {fam:?} over members in order").unwrap();
            }
        }
    }
    writeln!(out, "unit P -> R L P is an isomorphism: {}", if unit { "yes" } else { "no" }).unwrap();
    Ok(Report::failed(out))
}

pub fn sigma(path: &Path) -> Result<Report> {
    let d = read(path)?;
    expect_kind(&d, "space")?;
    let Body::Space(b) = &d.body else { unreachable!() };
    Ok(Report::document(Body::Basis(Source::of_space(&Space::from_body(b)?).basis_body())))
}

pub fn lambda_cmd(path: &Path, opts: &Options) -> Result<Report> {
    let s = source(path, opts)?;
    let space = Space {
        space: lambda(&s.ionad)?,
        points: s.points,
    };
    Ok(Report::document(Body::Space(space.to_body())))
}

pub fn alexandroff(path: &Path) -> Result<Report> {
    let d = read(path)?;
    let Body::Category(b) = &d.body else {
        return Err(CliError::Invalid(format!("expected a category document, found {}", d.body.kind())));
    };
    Ok(Report::document(Body::Basis(Source::of_category(&Category::from_body(b)?).basis_body())))
}

pub fn equivariant(path: &Path) -> Result<Report> {
    let d = read(path)?;
    let Body::GroupAction(b) = &d.body else {
        return Err(CliError::Invalid(format!("expected a group-action document, found {}", d.body.kind())));
    };
    Ok(Report::document(Body::Basis(Source::of_action(&Action::from_body(b)?).basis_body())))
}

/// Labels `src->dst`, with `#k` appended when the hom-set has several members.
fn arrow_labels(cat: &FinCategory, objects: &[String]) -> Category {
    Category::labelled(Arc::new(cat.clone()), objects.to_vec(), |g| {
        let (a, b) = (cat.src(g), cat.dst(g));
        let base = format!("{}->{}", objects[a], objects[b]);
        if cat.hom(a, b).len() > 1 {
            format!("{base}#{}", cat.hom_position(g))
        } else {
            base
        }
    })
}

pub fn spec_cat(path: &Path, opts: &Options) -> Result<Report> {
    let s = source(path, opts)?;
    let v = specialisation_category(&s.ionad)?;
    Ok(Report::document(Body::Category(arrow_labels(&v.category, &s.points).to_body())))
}

fn map_label(m: &ContinuousMap, src: &Source, dst: &Source) -> String {
    let parts: Vec<String> = m
        .point_map()
        .iter()
        .enumerate()
        .map(|(x, &y)| format!("{}={}", src.points[x], dst.points[y]))
        .collect();
    format!("[{}]", parts.join(","))
}

pub fn hom_cat(src: &Path, dst: &Path, opts: &Options) -> Result<Report> {
    let (x, y) = (source(src, opts)?, source(dst, opts)?);
    let hom = hom_category(&x.ionad, &y.ionad)?;
    let mut objects: Vec<String> = Vec::with_capacity(hom.maps.len());
    for m in &hom.maps {
        let base = map_label(m, &x, &y);
        let repeats = hom.maps.iter().filter(|n| n.point_map() == m.point_map()).count();
        let seen = objects.iter().filter(|o| o.starts_with(&base)).count();
        objects.push(if repeats > 1 { format!("{base}#{seen}") } else { base });
    }
    Ok(Report::document(Body::Category(arrow_labels(&hom.category, &objects).to_body())))
}

fn read_map(path: &Path, opts: &Options) -> Result<(Map, MapBody)> {
    let d = read(path)?;
    let Body::Map(body) = d.body else {
        return Err(CliError::Invalid(format!("expected a map document, found {}", d.body.kind())));
    };
    Ok((Map::from_body(&body, opts.budget)?, body))
}

/// Why no lifting exists: an object whose pulled-back value carries no
/// coalgebra structure, if there is one.
fn no_lifting_witness(m: &Map) -> Result<String> {
    let target = m.dst.ionad.basis();
    for b in 0..target.object_count() {
        let pulled = target.value(b).reindex(&m.point_map);
        if m.src.ionad.enumerate_coalgebra_structures(&pulled)?.is_empty() {
            return Ok(format!(
                "no coalgebra structure on the pullback of the basis value at {}",
                m.dst.shape.objects[b]
            ));
        }
    }
    Ok("no functorial choice of coalgebra structures on the pulled-back basis".into())
}

pub fn map_check(path: &Path, opts: &Options) -> Result<Report> {
    let (m, _) = read_map(path, opts)?;
    let lifts = ContinuousMap::enumerate(&m.src.ionad, &m.dst.ionad, &m.point_map)?;
    if lifts.is_empty() {
        return Ok(Report::failed(format!("not continuous: {}\n", no_lifting_witness(&m)?)));
    }
    for l in &lifts {
        if let Err(v) = check_continuous(l) {
            return Ok(Report::failed(format!("not continuous: {v}\n")));
        }
    }
    Ok(Report::ok(format!("continuous: {} liftings\n", lifts.len())))
}

pub fn compose_cmd(first: &Path, second: &Path, opts: &Options) -> Result<Report> {
    let (f, fb) = read_map(first, opts)?;
    let (g, gb) = read_map(second, opts)?;
    if f.dst.ionad != g.src.ionad || f.dst.points != g.src.points {
        return Err(CliError::Invalid("the target of the first map is not the source of the second".into()));
    }
    let lift = |m: &Map, which: &str| -> Result<std::result::Result<ContinuousMap, String>> {
        Ok(ContinuousMap::enumerate(&m.src.ionad, &m.dst.ionad, &m.point_map)?
            .into_iter()
            .next()
            .ok_or_else(|| format!("{which} map is not continuous\n")))
    };
    let (lf, lg) = match (lift(&f, "first")?, lift(&g, "second")?) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Ok(Report::failed(e)),
    };
    let h = compose(&lg, &lf)?;
    if let Err(v) = check_continuous(&h) {
        return Ok(Report::failed(format!("composite is not continuous: {v}\n")));
    }
    let points = f
        .src
        .points
        .iter()
        .zip(h.point_map())
        .map(|(p, &z)| (p.clone(), g.dst.points[z].clone()))
        .collect();
    Ok(Report::document(Body::Map(MapBody {
        src: fb.src,
        dst: gb.dst,
        points,
    })))
}

fn pairs(left: &[String], right: &[String]) -> Vec<String> {
    left.iter()
        .flat_map(|a| right.iter().map(move |b| format!("({a},{b})")))
        .collect()
}

pub fn product_cmd(left: &Path, right: &Path, opts: &Options) -> Result<Report> {
    let (x, y) = (source(left, opts)?, source(right, opts)?);
    let w = product(&x.ionad, &y.ionad)?;
    let cat = w.product.basis().shape().clone();
    let objects = pairs(&x.shape.objects, &y.shape.objects);
    let morphisms = pairs(&x.shape.morphisms, &y.shape.morphisms);
    let shape = Category::labelled(cat, objects, |g| morphisms[g].clone());
    let basis = Basis {
        basis: w.product.basis().clone(),
        points: pairs(&x.points, &y.points),
        shape,
    };
    Ok(Report::document(Body::Basis(basis.to_body())))
}

pub fn coproduct_cmd(paths: &[std::path::PathBuf], opts: &Options) -> Result<Report> {
    let sources = paths.iter().map(|p| source(p, opts)).collect::<Result<Vec<_>>>()?;
    let c = coproduct(&sources.iter().map(|s| s.ionad.clone()).collect::<Vec<_>>());
    let tag = |f: fn(&Source) -> &Vec<String>| -> Vec<String> {
        sources
            .iter()
            .enumerate()
            .flat_map(|(k, s)| f(s).iter().map(move |l| format!("{k}.{l}")))
            .collect()
    };
    let basis = c.basis();
    let morphisms = tag(|s| &s.shape.morphisms);
    let shape = Category::labelled(basis.shape().clone(), tag(|s| &s.shape.objects), |g| morphisms[g].clone());
    let out = Basis {
        basis,
        points: tag(|s| &s.points),
        shape,
    };
    Ok(Report::document(Body::Basis(out.to_body())))
}

pub fn tensor_cmd(category: &Path, ionad: &Path, opts: &Options) -> Result<Report> {
    let d = read(category)?;
    let Body::Category(cb) = &d.body else {
        return Err(CliError::Invalid(format!("expected a category document, found {}", d.body.kind())));
    };
    let c = Category::from_body(cb)?;
    let x = source(ionad, opts)?;
    let t = tensor(&c.cat, &x.ionad)?;
    let morphisms = pairs(&c.morphisms, &x.shape.morphisms);
    let shape = Category::labelled(t.basis().shape().clone(), pairs(&c.objects, &x.shape.objects), |g| {
        morphisms[g].clone()
    });
    let basis = Basis {
        basis: t.basis().clone(),
        points: pairs(&c.objects, &x.points),
        shape,
    };
    Ok(Report::document(Body::Basis(basis.to_body())))
}

pub fn cotensor_cmd(path: &Path, opts: &Options) -> Result<Report> {
    let x = source(path, opts)?;
    let w = cotensor_arrow(&x.ionad)?;
    let points = arrow_labels(&w.specialisations.category, &x.points).morphisms;
    let names = &x.shape.morphisms;
    let shape = Category::labelled(w.ionad.basis().shape().clone(), names.clone(), |g| {
        let sq = w.arrows.squares[g];
        format!("({},{}):{}>{}", names[sq.top], names[sq.bottom], names[sq.source], names[sq.target])
    });
    let basis = Basis {
        basis: w.ionad.basis().clone(),
        points,
        shape,
    };
    Ok(Report::document(Body::Basis(basis.to_body())))
}

fn quote(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

fn dot_edges(out: &mut String, shape: &Category) {
    let cat = &shape.cat;
    for g in 0..cat.morphism_count() {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&shape.objects[cat.src(g)]),
            quote(&shape.objects[cat.dst(g)]),
            quote(&shape.morphisms[g])
        )
        .unwrap();
    }
}

pub fn export_dot(path: &Path, opts: &Options) -> Result<Report> {
    let d = read(path)?;
    let mut out = String::new();
    if let Body::Category(b) = &d.body {
        let c = Category::from_body(b)?;
        out.push_str("digraph category {\n");
        for o in &c.objects {
            writeln!(out, "  {};", quote(o)).unwrap();
        }
        dot_edges(&mut out, &c);
    } else {
        let s = Source::from_document(&d, opts.budget)?;
        let t = generate_topology(Arc::new(s.ionad.basis().clone()), &opts.budget)?;
        out.push_str("digraph site {\n");
        for (u, o) in s.shape.objects.iter().enumerate() {
            let covers: Vec<String> = t.covers(u).iter().map(|c| sieve_label(&s.shape, c)).collect();
            writeln!(out, "  {} [covers={}];", quote(o), quote(&covers.join(" "))).unwrap();
        }
        dot_edges(&mut out, &s.shape);
    }
    out.push_str("}\n");
    Ok(Report::ok(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_quoting() {
        assert_eq!(quote("a"), "\"a\"");
        assert_eq!(quote("a\"b\\c"), "\"a\\\"b\\\\c\"");
    }

    #[test]
    fn product_labels_pair_in_order() {
        let l = pairs(&["a".into(), "b".into()], &["x".into()]);
        assert_eq!(l, ["(a,x)", "(b,x)"]);
    }

    #[test]
    fn parallel_arrows_are_numbered() {
        // two parallel arrows between two objects
        let ends = [(0, 0), (1, 1), (0, 1), (0, 1)];
        let cat = FinCategory::new(2, ends.to_vec(), vec![0, 1], |g, f| {
            (ends[f].1 == ends[g].0).then_some(if g < 2 { f } else { g })
        })
        .unwrap();
        let c = arrow_labels(&cat, &["x".into(), "y".into()]);
        let mut named: Vec<&str> = c.morphisms.iter().map(String::as_str).collect();
        named.sort();
        assert_eq!(named, ["id:x", "id:y", "x->y#0", "x->y#1"]);
    }
}
