//! Permutations of `{1..degree}` in image-array form.
//!
//! Products are read left to right: `p.then(&q)` maps `i` to `q(p(i))`.
//! A written product `a₁a₂⋯a_k` therefore applies `a₁` first.

use std::fmt;

use thiserror::Error;

/// Largest supported degree.
pub const MAX_DEGREE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree {0} is outside 1..={MAX_DEGREE}")]
    BadDegree(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("image array is not a bijection")]
    NotBijection,
    #[error("cannot parse permutation {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("point {point} exceeds degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
}

/// A bijection of `{1..degree}`.
///
/// Internally points are zero based and the unused tail of `images` is
/// kept as the identity, so comparing two permutations of the same degree
/// compares their image arrays lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: [u8; MAX_DEGREE],
    degree: u8,
}

const IDENTITY_IMAGES: [u8; MAX_DEGREE] = {
    let mut a = [0u8; MAX_DEGREE];
    let mut i = 0;
    while i < MAX_DEGREE {
        a[i] = i as u8;
        i += 1;
    }
    a
};

impl Perm {
    pub fn identity(degree: usize) -> Result<Self, PermError> {
        check_degree(degree)?;
        Ok(Perm {
            images: IDENTITY_IMAGES,
            degree: degree as u8,
        })
    }

    /// Builds a permutation from one-based images: `images[i]` is the image
    /// of point `i + 1`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let degree = images.len();
        check_degree(degree)?;
        let mut out = IDENTITY_IMAGES;
        let mut seen = [false; MAX_DEGREE];
        for (i, &img) in images.iter().enumerate() {
            if img == 0 || img > degree || seen[img - 1] {
                return Err(PermError::NotBijection);
            }
            seen[img - 1] = true;
            out[i] = (img - 1) as u8;
        }
        Ok(Perm {
            images: out,
            degree: degree as u8,
        })
    }

    /// Builds a permutation from a list of cycles of one-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut p = Perm::identity(degree)?;
        let mut moved = [false; MAX_DEGREE];
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                if pt == 0 || pt > degree {
                    return Err(PermError::PointOutOfRange { point: pt, degree });
                }
                if moved[pt - 1] {
                    return Err(PermError::NotBijection);
                }
                moved[pt - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                p.images[pt - 1] = (next - 1) as u8;
            }
        }
        Ok(p)
    }

    /// Parses disjoint cycle notation such as `(1,2,3)(4,5)` or `()`.
    pub fn parse(text: &str, degree: usize) -> Result<Self, PermError> {
        let err = |reason: &str| PermError::Parse {
            input: text.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty string"));
        }
        let mut cycles = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| err("expected '('"))?;
            let close = body.find(')').ok_or_else(|| err("unbalanced parentheses"))?;
            let inner = &body[..close];
            if !inner.is_empty() {
                let cycle = inner
                    .split(',')
                    .map(|t| t.parse::<usize>().map_err(|_| err("bad point")))
                    .collect::<Result<Vec<_>, _>>()?;
                cycles.push(cycle);
            }
            rest = &body[close + 1..];
        }
        Perm::from_cycles(degree, &cycles).map_err(|e| match e {
            PermError::NotBijection => err("repeated point"),
            other => other,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// Image of the one-based point `point`.
    pub fn apply(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }

    /// One-based image array.
    pub fn images(&self) -> Vec<usize> {
        self.images[..self.degree()]
            .iter()
            .map(|&x| x as usize + 1)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images == IDENTITY_IMAGES
    }

    /// `self` followed by `other`, i.e. `i ↦ other(self(i))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree != other.degree {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.then(other))
    }

    /// Unchecked [`Perm::compose`]; degrees must agree.
    pub(crate) fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree, other.degree);
        let mut images = IDENTITY_IMAGES;
        for (slot, &img) in images.iter_mut().zip(self.images.iter()) {
            *slot = other.images[img as usize];
        }
        Perm {
            images,
            degree: self.degree,
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = IDENTITY_IMAGES;
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u8;
        }
        Perm {
            images,
            degree: self.degree,
        }
    }

    pub fn order(&self) -> usize {
        let mut order = 1;
        let mut p = *self;
        while !p.is_identity() {
            p = p.then(self);
            order += 1;
        }
        order
    }

    /// Re-embeds the permutation in another degree. Fails if a moved point
    /// would fall outside the new range.
    pub fn with_degree(&self, degree: usize) -> Result<Perm, PermError> {
        check_degree(degree)?;
        if let Some(pt) = (degree..MAX_DEGREE).find(|&i| self.images[i] as usize != i) {
            return Err(PermError::PointOutOfRange {
                point: pt + 1,
                degree,
            });
        }
        Ok(Perm {
            images: self.images,
            degree: degree as u8,
        })
    }

    /// Largest moved point, or 0 for the identity.
    pub fn largest_moved_point(&self) -> usize {
        (0..MAX_DEGREE)
            .rev()
            .find(|&i| self.images[i] as usize != i)
            .map_or(0, |i| i + 1)
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest point,
    /// sorted by smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = [false; MAX_DEGREE];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut pt = start;
            while !seen[pt] {
                seen[pt] = true;
                cycle.push(pt + 1);
                pt = self.images[pt] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

fn check_degree(degree: usize) -> Result<(), PermError> {
    if degree == 0 || degree > MAX_DEGREE {
        Err(PermError::BadDegree(degree))
    } else {
        Ok(())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, pt) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{pt}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}
