use crate::error::{Error, Result};
use crate::lattice::{GroupElement, Lattice, Word};

/// The vertices of a word-metric ball where γ moves points least.
#[derive(Debug, Clone)]
pub struct MinsetRegion {
    pub gamma: GroupElement,
    pub radius: u32,
    pub displacement: u32,
    /// (shortest word, element) for each minimizing vertex, in ball order.
    pub vertices: Vec<(Word, GroupElement)>,
}

/// Displacement of the vertex v·O under γ is ℓ(v⁻¹γv).
pub fn minset_region(lattice: &Lattice, gamma: &GroupElement, radius: u32) -> Result<MinsetRegion> {
    if gamma.is_identity() {
        return Err(Error::IdentityElement);
    }
    let mut best = u32::MAX;
    let mut vertices = Vec::new();
    for (w, v) in lattice.ball(radius)? {
        let d = v.invert().multiply(gamma)?.multiply(&v)?.length();
        if d < best {
            best = d;
            vertices.clear();
        }
        if d == best {
            vertices.push((w, v));
        }
    }
    Ok(MinsetRegion {
        gamma: gamma.clone(),
        radius,
        displacement: best,
        vertices,
    })
}

impl MinsetRegion {
    fn pairwise_max(&self, f: impl Fn(&GroupElement) -> u32) -> Result<u32> {
        let mut m = 0;
        for (_, v) in &self.vertices {
            let vi = v.invert();
            for (_, w) in &self.vertices {
                m = m.max(f(&vi.multiply(w)?));
            }
        }
        Ok(m)
    }

    /// Largest distance between two region vertices in the p-tree.
    pub fn horizontal_extent(&self) -> Result<u32> {
        self.pairwise_max(|g| g.r())
    }

    /// Largest distance between two region vertices in the l-tree.
    pub fn vertical_extent(&self) -> Result<u32> {
        self.pairwise_max(|g| g.s())
    }

    /// Vertices grouped by their position in the p-tree: v and w share a
    /// column iff v⁻¹w involves no A-letters.
    pub fn columns(&self) -> Result<Vec<Vec<usize>>> {
        self.classes(|g| g.r() == 0)
    }

    /// Vertices grouped by their position in the l-tree.
    pub fn rows(&self) -> Result<Vec<Vec<usize>>> {
        self.classes(|g| g.s() == 0)
    }

    fn classes(&self, same: impl Fn(&GroupElement) -> bool) -> Result<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        'outer: for (i, (_, v)) in self.vertices.iter().enumerate() {
            let vi = v.invert();
            for class in out.iter_mut() {
                if same(&vi.multiply(&self.vertices[class[0]].1)?) {
                    class.push(i);
                    continue 'outer;
                }
            }
            out.push(vec![i]);
        }
        Ok(out)
    }

    pub fn column_count(&self) -> Result<usize> {
        Ok(self.columns()?.len())
    }
}
