//! The operad of spliced arrows over a free category.
//!
//! An n-ary spliced arrow `w₀−w₁−…−wₙ : (A₁,B₁),…,(Aₙ,Bₙ) → (A,B)` is a
//! sequence of n+1 paths with `wᵢ : Bᵢ → Aᵢ₊₁`, where `B₀ = A` and
//! `Aₙ₊₁ = B`. Composition splices an operand into a gap and composes the
//! paths that meet at its boundary.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freecat::{enumerate_paths, FiniteGraph, FreeFunctor, Path};

/// A color of the spliced-arrow operad: a pair of objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GapType {
    pub left: String,
    pub right: String,
}

impl GapType {
    pub fn new(left: impl Into<String>, right: impl Into<String>) -> Self {
        GapType {
            left: left.into(),
            right: right.into(),
        }
    }

    pub fn check_in(&self, graph: &FiniteGraph) -> Result<()> {
        for o in [&self.left, &self.right] {
            if !graph.has_object(o) {
                return Err(Error::UnknownObject(o.clone()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for GapType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.left, self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplicedArrow {
    outer: GapType,
    gaps: Vec<GapType>,
    segments: Vec<Path>,
}

impl SplicedArrow {
    /// Builds a spliced arrow, checking that each segment runs between the
    /// boundaries of the surrounding gaps.
    pub fn new(outer: GapType, gaps: Vec<GapType>, segments: Vec<Path>) -> Result<Self> {
        let arrow = SplicedArrow::from_parts(outer, gaps, segments);
        arrow.check_typing()?;
        Ok(arrow)
    }

    /// Assembles a spliced arrow without any checks.
    pub fn from_parts(outer: GapType, gaps: Vec<GapType>, segments: Vec<Path>) -> Self {
        SplicedArrow { outer, gaps, segments }
    }

    /// A nullary spliced arrow, i.e. a single path.
    pub fn constant(p: Path) -> Self {
        SplicedArrow {
            outer: GapType::new(p.src(), p.dst()),
            gaps: Vec::new(),
            segments: vec![p],
        }
    }

    /// `id_A − id_B`.
    pub fn identity(g: &GapType) -> Self {
        SplicedArrow {
            outer: g.clone(),
            gaps: vec![g.clone()],
            segments: vec![Path::identity(&g.left), Path::identity(&g.right)],
        }
    }

    /// Expected `(src, dst)` of every segment, from the declared gap types.
    pub fn segment_types(outer: &GapType, gaps: &[GapType]) -> Vec<(String, String)> {
        let n = gaps.len();
        (0..=n)
            .map(|i| {
                let src = if i == 0 { &outer.left } else { &gaps[i - 1].right };
                let dst = if i == n { &outer.right } else { &gaps[i].left };
                (src.clone(), dst.clone())
            })
            .collect()
    }

    pub fn check_typing(&self) -> Result<()> {
        if self.segments.len() != self.gaps.len() + 1 {
            return Err(Error::TypeMismatch {
                expected: format!("{} segments", self.gaps.len() + 1),
                found: format!("{} segments", self.segments.len()),
            });
        }
        for (k, ((src, dst), seg)) in Self::segment_types(&self.outer, &self.gaps)
            .into_iter()
            .zip(&self.segments)
            .enumerate()
        {
            if seg.src() != src || seg.dst() != dst {
                return Err(Error::TypeMismatch {
                    expected: format!("segment {k} : {src} → {dst}"),
                    found: format!("{} → {}", seg.src(), seg.dst()),
                });
            }
        }
        Ok(())
    }

    /// Full check against a category: typing plus every segment a valid path.
    pub fn check_in(&self, graph: &FiniteGraph) -> Result<()> {
        self.outer.check_in(graph)?;
        for g in &self.gaps {
            g.check_in(graph)?;
        }
        self.check_typing()?;
        for seg in &self.segments {
            graph.check_path(seg)?;
        }
        Ok(())
    }

    pub fn outer(&self) -> &GapType {
        &self.outer
    }

    pub fn gaps(&self) -> &[GapType] {
        &self.gaps
    }

    pub fn segments(&self) -> &[Path] {
        &self.segments
    }

    pub fn arity(&self) -> usize {
        self.gaps.len()
    }

    pub fn as_constant(&self) -> Option<&Path> {
        if self.gaps.is_empty() {
            self.segments.first()
        } else {
            None
        }
    }

    /// Total number of generators across all segments.
    pub fn len(&self) -> usize {
        self.segments.iter().map(Path::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Partial composition `self ∘ᵢ g`: splices `g` into gap `i` (0-indexed
    /// from the left).
    pub fn compose_partial(&self, i: usize, g: &SplicedArrow) -> Result<SplicedArrow> {
        let gap = self.gaps.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            arity: self.arity(),
        })?;
        if gap != &g.outer {
            return Err(Error::TypeMismatch {
                expected: gap.to_string(),
                found: g.outer.to_string(),
            });
        }
        let m = g.arity();
        let mut segments = Vec::with_capacity(self.segments.len() + m);
        segments.extend(self.segments[..i].iter().cloned());
        if m == 0 {
            let merged = self.segments[i]
                .compose(&g.segments[0])?
                .compose(&self.segments[i + 1])?;
            segments.push(merged);
        } else {
            segments.push(self.segments[i].compose(&g.segments[0])?);
            segments.extend(g.segments[1..m].iter().cloned());
            segments.push(g.segments[m].compose(&self.segments[i + 1])?);
        }
        segments.extend(self.segments[i + 2..].iter().cloned());
        let mut gaps = Vec::with_capacity(self.gaps.len() + m);
        gaps.extend(self.gaps[..i].iter().cloned());
        gaps.extend(g.gaps.iter().cloned());
        gaps.extend(self.gaps[i + 1..].iter().cloned());
        Ok(SplicedArrow {
            outer: self.outer.clone(),
            gaps,
            segments,
        })
    }

    /// Parallel composition `self ∘ (g₁,…,gₙ)`: splices every operand at once.
    pub fn compose_parallel(&self, gs: &[SplicedArrow]) -> Result<SplicedArrow> {
        if gs.len() != self.arity() {
            return Err(Error::TypeMismatch {
                expected: format!("{} operands", self.arity()),
                found: format!("{} operands", gs.len()),
            });
        }
        for (gap, g) in self.gaps.iter().zip(gs) {
            if gap != &g.outer {
                return Err(Error::TypeMismatch {
                    expected: gap.to_string(),
                    found: g.outer.to_string(),
                });
            }
        }
        let mut segments = Vec::new();
        let mut gaps = Vec::new();
        let mut pending = self.segments[0].clone();
        for (k, g) in gs.iter().enumerate() {
            pending = pending.compose(&g.segments[0])?;
            for (inner, seg) in g.gaps.iter().zip(&g.segments[1..]) {
                segments.push(pending);
                gaps.push(inner.clone());
                pending = seg.clone();
            }
            pending = pending.compose(&self.segments[k + 1])?;
        }
        segments.push(pending);
        Ok(SplicedArrow {
            outer: self.outer.clone(),
            gaps,
            segments,
        })
    }

    /// The image under a functor of the underlying categories.
    pub fn map(&self, f: &FreeFunctor) -> Result<SplicedArrow> {
        let gap = |g: &GapType| -> Result<GapType> { Ok(GapType::new(f.map_object(&g.left)?, f.map_object(&g.right)?)) };
        Ok(SplicedArrow {
            outer: gap(&self.outer)?,
            gaps: self.gaps.iter().map(gap).collect::<Result<_>>()?,
            segments: self.segments.iter().map(|s| f.apply(s)).collect::<Result<_>>()?,
        })
    }

    pub fn to_repr(&self) -> SplicedRepr {
        SplicedRepr {
            outer: self.outer.clone(),
            gaps: self.gaps.clone(),
            segments: self.segments.iter().map(|s| s.gens().to_vec()).collect(),
        }
    }

    /// Rebuilds a spliced arrow from its serialized form; segment endpoints
    /// come from the gap types.
    pub fn from_repr(graph: &FiniteGraph, repr: &SplicedRepr) -> Result<SplicedArrow> {
        Self::from_segments(graph, repr.outer.clone(), repr.gaps.clone(), &repr.segments)
    }

    pub fn from_segments(
        graph: &FiniteGraph,
        outer: GapType,
        gaps: Vec<GapType>,
        segments: &[Vec<String>],
    ) -> Result<SplicedArrow> {
        if segments.len() != gaps.len() + 1 {
            return Err(Error::TypeMismatch {
                expected: format!("{} segments", gaps.len() + 1),
                found: format!("{} segments", segments.len()),
            });
        }
        let types = Self::segment_types(&outer, &gaps);
        let mut paths = Vec::with_capacity(segments.len());
        for ((src, dst), gens) in types.iter().zip(segments) {
            let p = graph.path(src, gens)?;
            if p.dst() != dst {
                return Err(Error::TypeMismatch {
                    expected: format!("segment {} : {src} → {dst}", p),
                    found: format!("{src} → {}", p.dst()),
                });
            }
            paths.push(p);
        }
        let arrow = SplicedArrow {
            outer,
            gaps,
            segments: paths,
        };
        arrow.check_in(graph)?;
        Ok(arrow)
    }
}

impl fmt::Display for SplicedArrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, seg) in self.segments.iter().enumerate() {
            if k > 0 {
                f.write_str("−")?;
            }
            f.write_str(&seg.to_word_string())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplicedRepr {
    pub outer: GapType,
    pub gaps: Vec<GapType>,
    pub segments: Vec<Vec<String>>,
}

/// The constants of gap type `g` with at most `max_len` generators.
pub fn constants_of(graph: &FiniteGraph, g: &GapType, max_len: usize) -> Vec<SplicedArrow> {
    enumerate_paths(graph, &g.left, &g.right, max_len)
        .into_iter()
        .map(SplicedArrow::constant)
        .collect()
}
