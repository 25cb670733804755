//! Free categories on finite graphs.
//!
//! Arrows of a free category are paths: an identity at an object, or a
//! non-empty sequence of composable generators. Two paths are equal exactly
//! when their endpoints and generator sequences agree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The single object of the one-object category of an alphabet.
pub const STAR: &str = "*";
/// The object adjoined by [`end_marked`] and the terminal category.
pub const TOP: &str = "⊤";
/// The end-of-input generator adjoined by [`end_marked`].
pub const END_MARKER: &str = "$";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub src: String,
    pub dst: String,
}

impl Generator {
    pub fn new(name: impl Into<String>, src: impl Into<String>, dst: impl Into<String>) -> Self {
        Generator {
            name: name.into(),
            src: src.into(),
            dst: dst.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphRepr {
    objects: Vec<String>,
    generators: Vec<Generator>,
}

/// A finite directed graph presenting a free category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct FiniteGraph {
    objects: Vec<String>,
    generators: Vec<Generator>,
    object_index: BTreeMap<String, usize>,
    generator_index: BTreeMap<String, usize>,
}

impl TryFrom<GraphRepr> for FiniteGraph {
    type Error = Error;

    fn try_from(repr: GraphRepr) -> Result<Self> {
        FiniteGraph::new(repr.objects, repr.generators)
    }
}

impl From<FiniteGraph> for GraphRepr {
    fn from(g: FiniteGraph) -> Self {
        GraphRepr {
            objects: g.objects,
            generators: g.generators,
        }
    }
}

impl FiniteGraph {
    pub fn new(objects: Vec<String>, generators: Vec<Generator>) -> Result<Self> {
        let mut graph = FiniteGraph {
            objects: Vec::new(),
            generators: Vec::new(),
            object_index: BTreeMap::new(),
            generator_index: BTreeMap::new(),
        };
        for o in objects {
            graph.add_object(o)?;
        }
        for g in generators {
            graph.add_generator(g)?;
        }
        Ok(graph)
    }

    pub fn empty() -> Self {
        FiniteGraph {
            objects: Vec::new(),
            generators: Vec::new(),
            object_index: BTreeMap::new(),
            generator_index: BTreeMap::new(),
        }
    }

    /// The one-object graph `M[Σ]` whose paths are the words over `alphabet`.
    pub fn monoid<S: AsRef<str>>(alphabet: &[S]) -> Result<Self> {
        FiniteGraph::new(
            vec![STAR.to_string()],
            alphabet
                .iter()
                .map(|a| Generator::new(a.as_ref(), STAR, STAR))
                .collect(),
        )
    }

    /// The terminal category: one object, no generators.
    pub fn terminal() -> Self {
        FiniteGraph::new(vec![TOP.to_string()], Vec::new()).expect("single object")
    }

    pub fn add_object(&mut self, name: impl Into<String>) -> Result<()> {
        let name = name.into();
        if self.object_index.contains_key(&name) {
            return Err(Error::Duplicate(name));
        }
        self.object_index.insert(name.clone(), self.objects.len());
        self.objects.push(name);
        Ok(())
    }

    pub fn add_generator(&mut self, g: Generator) -> Result<()> {
        if self.generator_index.contains_key(&g.name) {
            return Err(Error::Duplicate(g.name));
        }
        for o in [&g.src, &g.dst] {
            if !self.has_object(o) {
                return Err(Error::UnknownObject(o.clone()));
            }
        }
        self.generator_index.insert(g.name.clone(), self.generators.len());
        self.generators.push(g);
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn has_object(&self, name: &str) -> bool {
        self.object_index.contains_key(name)
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generator_index.get(name).map(|&i| &self.generators[i])
    }

    pub fn object_position(&self, name: &str) -> Option<usize> {
        self.object_index.get(name).copied()
    }

    pub fn generator_position(&self, name: &str) -> Option<usize> {
        self.generator_index.get(name).copied()
    }

    /// Generators leaving `object`, sorted by name.
    pub fn outgoing(&self, object: &str) -> Vec<&Generator> {
        let mut out: Vec<&Generator> = self.generators.iter().filter(|g| g.src == object).collect();
        out.sort_by(|a, b| a.name.cmp(&b.name));
        out
    }

    /// Builds the path `gens` starting at `src`, checking composability.
    pub fn path<S: AsRef<str>>(&self, src: &str, gens: &[S]) -> Result<Path> {
        if !self.has_object(src) {
            return Err(Error::UnknownObject(src.to_string()));
        }
        let mut at = src.to_string();
        let mut names = Vec::with_capacity(gens.len());
        for name in gens {
            let name = name.as_ref();
            let g = self
                .generator(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            if g.src != at {
                return Err(Error::Composition {
                    left: at,
                    right: g.src.clone(),
                });
            }
            at = g.dst.clone();
            names.push(name.to_string());
        }
        Ok(Path {
            src: src.to_string(),
            dst: at,
            gens: names,
        })
    }

    /// Builds a non-empty path from generator names alone.
    pub fn path_of<S: AsRef<str>>(&self, gens: &[S]) -> Result<Path> {
        let first = gens
            .first()
            .ok_or_else(|| Error::IllTypedPath("an empty path needs an explicit source".into()))?;
        let g = self
            .generator(first.as_ref())
            .ok_or_else(|| Error::UnknownGenerator(first.as_ref().to_string()))?;
        let src = g.src.clone();
        self.path(&src, gens)
    }

    pub fn identity(&self, object: &str) -> Result<Path> {
        self.path::<&str>(object, &[])
    }

    /// Checks that `p` is a well-typed path of this graph.
    pub fn check_path(&self, p: &Path) -> Result<()> {
        let rebuilt = self.path(&p.src, &p.gens)?;
        if rebuilt.dst != p.dst {
            return Err(Error::IllTypedPath(format!(
                "path {p} claims target `{}` but ends at `{}`",
                p.dst, rebuilt.dst
            )));
        }
        Ok(())
    }

    pub fn resolve(&self, repr: &PathRepr) -> Result<Path> {
        match repr {
            PathRepr::Gens(gens) if gens.is_empty() => Err(Error::IllTypedPath(
                "an empty path needs an explicit source".into(),
            )),
            PathRepr::Gens(gens) => self.path_of(gens),
            PathRepr::Explicit { src, gens } => self.path(src, gens),
        }
    }

    /// Objects visited by `p`, one per position `0..=len`.
    pub fn positions(&self, p: &Path) -> Result<Vec<String>> {
        let mut out = vec![p.src.clone()];
        for name in &p.gens {
            let g = self
                .generator(name)
                .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
            out.push(g.dst.clone());
        }
        Ok(out)
    }

    /// True when every generator name is a single character, so paths can be
    /// written as bare strings.
    pub fn single_char_generators(&self) -> bool {
        self.generators.iter().all(|g| g.name.chars().count() == 1)
    }

    /// Parses a bare string word, one generator per character.
    pub fn word(&self, src: &str, word: &str) -> Result<Path> {
        let gens: Vec<String> = word.chars().map(|c| c.to_string()).collect();
        self.path(src, &gens)
    }

    /// The same graph with every object and generator name prefixed.
    pub fn prefixed(&self, prefix: &str) -> FiniteGraph {
        FiniteGraph::new(
            self.objects.iter().map(|o| format!("{prefix}{o}")).collect(),
            self.generators
                .iter()
                .map(|g| {
                    Generator::new(
                        format!("{prefix}{}", g.name),
                        format!("{prefix}{}", g.src),
                        format!("{prefix}{}", g.dst),
                    )
                })
                .collect(),
        )
        .expect("prefixing preserves uniqueness")
    }
}

/// An arrow of a free category.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    src: String,
    dst: String,
    gens: Vec<String>,
}

impl Path {
    /// Assembles a path without consulting a graph. Use
    /// [`FiniteGraph::check_path`] to validate it.
    pub fn from_parts(src: impl Into<String>, dst: impl Into<String>, gens: Vec<String>) -> Self {
        Path {
            src: src.into(),
            dst: dst.into(),
            gens,
        }
    }

    pub fn identity(object: impl Into<String>) -> Self {
        let o = object.into();
        Path {
            src: o.clone(),
            dst: o,
            gens: Vec::new(),
        }
    }

    pub fn from_generator(g: &Generator) -> Self {
        Path {
            src: g.src.clone(),
            dst: g.dst.clone(),
            gens: vec![g.name.clone()],
        }
    }

    pub fn src(&self) -> &str {
        &self.src
    }

    pub fn dst(&self) -> &str {
        &self.dst
    }

    pub fn gens(&self) -> &[String] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Diagrammatic composition: `self` then `next`.
    pub fn compose(&self, next: &Path) -> Result<Path> {
        if self.dst != next.src {
            return Err(Error::Composition {
                left: self.dst.clone(),
                right: next.src.clone(),
            });
        }
        let mut gens = self.gens.clone();
        gens.extend(next.gens.iter().cloned());
        Ok(Path {
            src: self.src.clone(),
            dst: next.dst.clone(),
            gens,
        })
    }

    /// The sub-path between positions `i` and `j`, given the objects at
    /// every position.
    pub fn slice(&self, positions: &[String], i: usize, j: usize) -> Path {
        Path {
            src: positions[i].clone(),
            dst: positions[j].clone(),
            gens: self.gens[i..j].to_vec(),
        }
    }

    pub fn to_repr(&self) -> PathRepr {
        if self.gens.is_empty() {
            PathRepr::Explicit {
                src: self.src.clone(),
                gens: Vec::new(),
            }
        } else {
            PathRepr::Gens(self.gens.clone())
        }
    }

    /// Renders the path as a word: generators run together when they are all
    /// single characters, space-separated otherwise, `ε` for identities.
    pub fn to_word_string(&self) -> String {
        if self.gens.is_empty() {
            "ε".to_string()
        } else if self.gens.iter().all(|g| g.chars().count() == 1) {
            self.gens.concat()
        } else {
            self.gens.join(" ")
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            write!(f, "id[{}]", self.src)
        } else {
            f.write_str(&self.to_word_string())
        }
    }
}

/// Canonical order: length, then generator names lexicographically, then
/// endpoints.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gens
            .len()
            .cmp(&other.gens.len())
            .then_with(|| self.gens.cmp(&other.gens))
            .then_with(|| self.src.cmp(&other.src))
            .then_with(|| self.dst.cmp(&other.dst))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Serialized path: a bare array of generator names, or an object carrying
/// the source explicitly (required for identities).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PathRepr {
    Gens(Vec<String>),
    Explicit {
        src: String,
        #[serde(default)]
        gens: Vec<String>,
    },
}

/// A functor between free categories, determined by its action on objects
/// and generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeFunctor {
    domain: FiniteGraph,
    codomain: FiniteGraph,
    object_map: BTreeMap<String, String>,
    generator_map: BTreeMap<String, Path>,
}

impl FreeFunctor {
    pub fn new(
        domain: FiniteGraph,
        codomain: FiniteGraph,
        object_map: BTreeMap<String, String>,
        generator_map: BTreeMap<String, Path>,
    ) -> Result<Self> {
        for o in domain.objects() {
            let image = object_map
                .get(o)
                .ok_or_else(|| Error::Invalid(format!("object `{o}` has no image")))?;
            if !codomain.has_object(image) {
                return Err(Error::UnknownObject(image.clone()));
            }
        }
        for g in domain.generators() {
            let image = generator_map
                .get(&g.name)
                .ok_or_else(|| Error::Invalid(format!("generator `{}` has no image", g.name)))?;
            codomain.check_path(image)?;
            let (want_src, want_dst) = (&object_map[&g.src], &object_map[&g.dst]);
            if image.src() != want_src || image.dst() != want_dst {
                return Err(Error::TypeMismatch {
                    expected: format!("{want_src} → {want_dst}"),
                    found: format!("{} → {}", image.src(), image.dst()),
                });
            }
        }
        Ok(FreeFunctor {
            domain,
            codomain,
            object_map,
            generator_map,
        })
    }

    pub fn identity(graph: &FiniteGraph) -> Self {
        FreeFunctor {
            domain: graph.clone(),
            codomain: graph.clone(),
            object_map: graph.objects().iter().map(|o| (o.clone(), o.clone())).collect(),
            generator_map: graph
                .generators()
                .iter()
                .map(|g| (g.name.clone(), Path::from_generator(g)))
                .collect(),
        }
    }

    pub fn domain(&self) -> &FiniteGraph {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteGraph {
        &self.codomain
    }

    pub fn object_map(&self) -> &BTreeMap<String, String> {
        &self.object_map
    }

    pub fn generator_map(&self) -> &BTreeMap<String, Path> {
        &self.generator_map
    }

    pub fn map_object(&self, object: &str) -> Result<&str> {
        self.object_map
            .get(object)
            .map(String::as_str)
            .ok_or_else(|| Error::UnknownObject(object.to_string()))
    }

    /// The homomorphic image of a path.
    pub fn apply(&self, p: &Path) -> Result<Path> {
        let mut out = Path::identity(self.map_object(p.src())?);
        for name in p.gens() {
            let image = self
                .generator_map
                .get(name)
                .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
            out = out.compose(image)?;
        }
        Ok(out)
    }

    /// True when every generator goes to a single generator.
    pub fn is_generator_to_generator(&self) -> bool {
        self.generator_map.values().all(|p| p.len() == 1)
    }
}

/// `M[Σ]` with a fresh object `⊤` and a generator `$ : * → ⊤`.
pub fn end_marked(sigma: &FiniteGraph) -> Result<FiniteGraph> {
    if sigma.objects().len() != 1 {
        return Err(Error::Invalid(format!(
            "end marking needs a one-object graph, found {} objects",
            sigma.objects().len()
        )));
    }
    let star = sigma.objects()[0].clone();
    let mut out = sigma.clone();
    let top = fresh_name(TOP, "end_marked.", |n| sigma.has_object(n));
    let dollar = fresh_name(END_MARKER, "end_marked.", |n| sigma.generator(n).is_some());
    out.add_object(top.clone())?;
    out.add_generator(Generator::new(dollar, star, top))?;
    Ok(out)
}

fn fresh_name(base: &str, prefix: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut name = base.to_string();
    while taken(&name) {
        name = format!("{prefix}{name}");
    }
    name
}

/// Name of the generator freely adjoined from `a` to `b` by [`ordinal_sum`].
pub fn ordinal_generator_name(a: &str, b: &str) -> String {
    format!("e({a},{b})")
}

/// The ordinal sum `C +σ D`: the disjoint union with one fresh generator
/// `e(A,B) : A → B` for every object `A` of `C` and `B` of `D`.
///
/// When the name spaces of the summands overlap, the left summand is prefixed
/// with `l.` and the right with `r.`.
pub fn ordinal_sum(c: &FiniteGraph, d: &FiniteGraph) -> Result<FiniteGraph> {
    let clash = c.objects().iter().any(|o| d.has_object(o))
        || c.generators().iter().any(|g| d.generator(&g.name).is_some());
    let (c, d) = if clash {
        (c.prefixed("l."), d.prefixed("r."))
    } else {
        (c.clone(), d.clone())
    };
    let mut out = c.clone();
    for o in d.objects() {
        out.add_object(o.clone())?;
    }
    for g in d.generators() {
        out.add_generator(g.clone())?;
    }
    for a in c.objects() {
        for b in d.objects() {
            out.add_generator(Generator::new(ordinal_generator_name(a, b), a.clone(), b.clone()))?;
        }
    }
    Ok(out)
}

/// All paths `src → dst` with at most `max_len` generators, in canonical
/// (length, then lexicographic) order.
pub fn enumerate_paths(graph: &FiniteGraph, src: &str, dst: &str, max_len: usize) -> Vec<Path> {
    if !graph.has_object(src) || !graph.has_object(dst) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut layer = vec![Path::identity(src)];
    for len in 0..=max_len {
        out.extend(layer.iter().filter(|p| p.dst == dst).cloned());
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for p in &layer {
            for g in graph.outgoing(&p.dst) {
                let mut gens = p.gens.clone();
                gens.push(g.name.clone());
                next.push(Path {
                    src: p.src.clone(),
                    dst: g.dst.clone(),
                    gens,
                });
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    out
}

/// All paths with at most `max_len` generators, from every object.
pub fn enumerate_all_paths(graph: &FiniteGraph, max_len: usize) -> Vec<Path> {
    let mut out: Vec<Path> = graph
        .objects()
        .iter()
        .flat_map(|a| {
            graph
                .objects()
                .iter()
                .flat_map(move |b| enumerate_paths(graph, a, b, max_len))
        })
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> FiniteGraph {
        FiniteGraph::monoid(&["a", "b"]).unwrap()
    }

    fn words(paths: &[Path]) -> Vec<String> {
        paths.iter().map(Path::to_word_string).collect()
    }

    #[test]
    fn compose_concatenates() {
        let g = ab();
        let p = g.path(STAR, &["a"]).unwrap();
        let q = g.path(STAR, &["b"]).unwrap();
        assert_eq!(p.compose(&q).unwrap().gens(), ["a", "b"]);
        let id = g.identity(STAR).unwrap();
        assert_eq!(id.compose(&p).unwrap(), p);
    }

    #[test]
    fn compose_rejects_endpoint_mismatch() {
        let m = end_marked(&FiniteGraph::monoid(&["a"]).unwrap()).unwrap();
        let dollar = m.path(STAR, &["$"]).unwrap();
        let a = m.path(STAR, &["a"]).unwrap();
        assert!(matches!(dollar.compose(&a), Err(Error::Composition { .. })));
    }

    #[test]
    fn functor_expands_generators() {
        let dom = ab();
        let cod = FiniteGraph::monoid(&["c", "d"]).unwrap();
        let f = FreeFunctor::new(
            dom.clone(),
            cod.clone(),
            [(STAR.to_string(), STAR.to_string())].into(),
            [
                ("a".to_string(), cod.path(STAR, &["c", "d"]).unwrap()),
                ("b".to_string(), cod.identity(STAR).unwrap()),
            ]
            .into(),
        )
        .unwrap();
        let ab_path = dom.path(STAR, &["a", "b"]).unwrap();
        assert_eq!(f.apply(&ab_path).unwrap().gens(), ["c", "d"]);
        let id = dom.identity(STAR).unwrap();
        assert_eq!(f.apply(&id).unwrap(), cod.identity(STAR).unwrap());
        let abba = dom.path(STAR, &["a", "b", "b", "a"]).unwrap();
        assert_eq!(FreeFunctor::identity(&dom).apply(&abba).unwrap(), abba);
    }

    #[test]
    fn functor_rejects_ill_typed_images() {
        let dom = ab();
        let cod = end_marked(&dom).unwrap();
        let bad = FreeFunctor::new(
            dom,
            cod.clone(),
            [(STAR.to_string(), STAR.to_string())].into(),
            [
                ("a".to_string(), cod.path(STAR, &["$"]).unwrap()),
                ("b".to_string(), cod.path(STAR, &["b"]).unwrap()),
            ]
            .into(),
        );
        assert!(matches!(bad, Err(Error::TypeMismatch { .. })));
    }

    #[test]
    fn end_marked_adds_top_and_dollar() {
        let m = end_marked(&ab()).unwrap();
        assert_eq!(m.objects(), [STAR, TOP]);
        let names: Vec<_> = m.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["a", "b", "$"]);
        let empty = end_marked(&FiniteGraph::monoid::<&str>(&[]).unwrap()).unwrap();
        assert_eq!(empty.generators().len(), 1);
        assert_eq!(words(&enumerate_paths(&m, STAR, TOP, 2)), ["$", "a$", "b$"]);
    }

    #[test]
    fn ordinal_sum_adjoins_one_arrow_per_pair() {
        let sum = ordinal_sum(&FiniteGraph::monoid(&["a"]).unwrap(), &FiniteGraph::terminal()).unwrap();
        let e = ordinal_generator_name(STAR, TOP);
        let paths: Vec<Vec<String>> = enumerate_paths(&sum, STAR, TOP, 3)
            .into_iter()
            .map(|p| p.gens().to_vec())
            .collect();
        assert_eq!(
            paths,
            vec![
                vec![e.clone()],
                vec!["a".to_string(), e.clone()],
                vec!["a".to_string(), "a".to_string(), e]
            ]
        );
        let d = ab();
        assert_eq!(ordinal_sum(&FiniteGraph::empty(), &d).unwrap(), d);
    }

    #[test]
    fn ordinal_sum_renames_on_clash() {
        let m = ab();
        let sum = ordinal_sum(&m, &m).unwrap();
        assert_eq!(sum.objects(), ["l.*", "r.*"]);
        assert!(sum.generator("e(l.*,r.*)").is_some());
        assert_eq!(sum.generators().len(), 5);
    }

    #[test]
    fn enumerate_paths_examples() {
        let g = ab();
        assert_eq!(words(&enumerate_paths(&g, STAR, STAR, 1)), ["ε", "a", "b"]);
        let m = end_marked(&FiniteGraph::monoid(&["a"]).unwrap()).unwrap();
        assert_eq!(words(&enumerate_paths(&m, STAR, TOP, 3)), ["$", "a$", "aa$"]);
        assert!(enumerate_paths(&m, TOP, STAR, 5).is_empty());
    }

    #[test]
    fn path_counts_match_geometric_sum() {
        for k in 0..4usize {
            let alphabet: Vec<String> = (0..k).map(|i| format!("g{i}")).collect();
            let g = FiniteGraph::monoid(&alphabet).unwrap();
            for n in 0..5u32 {
                let expected: usize = (0..=n).map(|j| k.pow(j)).sum();
                assert_eq!(enumerate_paths(&g, STAR, STAR, n as usize).len(), expected);
            }
        }
    }

    #[test]
    fn graph_json_round_trip_and_validation() {
        let m = end_marked(&ab()).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: FiniteGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        let bad = r#"{"objects":["*"],"generators":[{"name":"a","src":"*","dst":"x"}]}"#;
        assert!(serde_json::from_str::<FiniteGraph>(bad).is_err());
        let dup = r#"{"objects":["*","*"],"generators":[]}"#;
        assert!(serde_json::from_str::<FiniteGraph>(dup).is_err());
    }

    #[test]
    fn path_repr_requires_source_for_identities() {
        let g = ab();
        let id: PathRepr = serde_json::from_str(r#"{"src":"*"}"#).unwrap();
        assert_eq!(g.resolve(&id).unwrap(), g.identity(STAR).unwrap());
        let empty: PathRepr = serde_json::from_str("[]").unwrap();
        assert!(g.resolve(&empty).is_err());
        let ab_repr: PathRepr = serde_json::from_str(r#"["a","b"]"#).unwrap();
        assert_eq!(g.resolve(&ab_repr).unwrap().to_repr(), ab_repr);
    }
}
