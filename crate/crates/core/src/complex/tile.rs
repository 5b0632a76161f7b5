use super::corner::{Corner, CornerTable};
use crate::error::{Error, Result};
use crate::lattice::{Family, Generator, GroupElement, Lattice, Presentation, Square, Word};

/// A W×H patch of an apartment. Vertex (i, j) sits at column i, row j.
///
/// `h[i][j]` labels the edge (i, j) → (i+1, j) and `v[i][j]` the edge
/// (i, j) → (i, j+1). The unit square with lower-left corner (i, j) reads
/// h[i][j] · v[i+1][j] = v[i][j] · h[i][j+1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileGrid {
    pub width: usize,
    pub height: usize,
    pub h: Vec<Vec<Generator>>,
    pub v: Vec<Vec<Generator>>,
}

impl TileGrid {
    pub fn square(&self, i: usize, j: usize) -> Square {
        Square {
            a: self.h[i][j],
            b: self.v[i + 1][j],
            b_tilde: self.v[i][j],
            a_tilde: self.h[i][j + 1],
        }
    }

    /// Horizontal labels along row j.
    pub fn row(&self, j: usize) -> Vec<Generator> {
        (0..self.width).map(|i| self.h[i][j]).collect()
    }

    /// Vertical labels up column i.
    pub fn column(&self, i: usize) -> Vec<Generator> {
        self.v[i].clone()
    }

    /// The group element at vertex (i, j): along the bottom row, then up.
    pub fn vertex(&self, lattice: &Lattice, i: usize, j: usize) -> Result<GroupElement> {
        let mut w: Vec<Generator> = (0..i).map(|x| self.h[x][0]).collect();
        w.extend_from_slice(&self.v[i][..j]);
        lattice.evaluate(&Word(w))
    }

    /// Re-evaluate every square by quaternion multiplication.
    pub fn check_relations(&self, lattice: &Lattice) -> Result<bool> {
        for i in 0..self.width {
            for j in 0..self.height {
                if !self.square(i, j).holds_in(lattice)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Tile the apartment of ⟨α, β⟩ starting from α along the bottom and β up
/// the left side.
///
/// Squares are completed bottom to top, left to right, from their bottom and
/// left edges. Afterwards row |β| must repeat row 0 and column |α| must
/// repeat column 0; otherwise the pair does not span a periodic apartment.
pub fn tile_apartment(
    pres: &Presentation,
    table: &CornerTable,
    alpha: &Word,
    beta: &Word,
    width: usize,
    height: usize,
) -> Result<TileGrid> {
    if alpha.is_empty() || beta.is_empty() {
        return Err(Error::NotPeriodicPair("both words must be nonempty".into()));
    }
    if !alpha.is_pure(Family::A) || !beta.is_pure(Family::B) {
        return Err(Error::NotPeriodicPair(format!(
            "need an A-word and a B-word, got {alpha} and {beta}"
        )));
    }
    let lattice = pres.lattice();
    let (ga, gb) = (lattice.evaluate(alpha)?, lattice.evaluate(beta)?);
    if !ga.commutes(&gb) {
        return Err(Error::NotPeriodicPair(format!(
            "{alpha} and {beta} do not commute"
        )));
    }

    let mut h = vec![vec![alpha.letters()[0]; height + 1]; width];
    let mut v = vec![vec![beta.letters()[0]; height]; width + 1];
    for (i, col) in h.iter_mut().enumerate() {
        col[0] = alpha.letters()[i % alpha.len()];
    }
    for (j, slot) in v[0].iter_mut().enumerate() {
        *slot = beta.letters()[j % beta.len()];
    }
    for j in 0..height {
        for i in 0..width {
            let sq = table
                .lookup(Corner::BottomLeft, h[i][j], v[i][j])
                .ok_or_else(|| Error::Invariant(format!("no square at ({i}, {j})")))?;
            v[i + 1][j] = sq.b;
            h[i][j + 1] = sq.a_tilde;
        }
    }
    let grid = TileGrid {
        width,
        height,
        h,
        v,
    };

    let (pa, pb) = (alpha.len(), beta.len());
    if height >= pb && (0..width).any(|i| grid.h[i][pb] != grid.h[i][0]) {
        return Err(Error::NotPeriodicPair(format!(
            "row {pb} differs from row 0"
        )));
    }
    if width >= pa && grid.v[pa] != grid.v[0] {
        return Err(Error::NotPeriodicPair(format!(
            "column {pa} differs from column 0"
        )));
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn setup() -> (Presentation, CornerTable) {
        let pres = Presentation::for_primes(3, 5).unwrap();
        let table = CornerTable::build(&pres).unwrap();
        (pres, table)
    }

    #[test]
    fn periodic_apartment() {
        let (pres, table) = setup();
        let g =
            tile_apartment(&pres, &table, &w("a1,a2',a1,a1"), &w("b3,b2',b3',b1"), 8, 8).unwrap();
        assert_eq!(Word(g.row(0)), w("a1,a2',a1,a1,a1,a2',a1,a1"));
        assert_eq!(Word(g.column(0)), w("b3,b2',b3',b1,b3,b2',b3',b1"));
        // the labels of the first 4×4 block
        let rows = [
            "a1,a2',a1,a1",
            "a1',a2,a2,a2",
            "a1,a1,a1,a2'",
            "a2,a2,a1',a2",
        ];
        let cols = [
            "b3,b2',b3',b1",
            "b2',b3,b1',b3'",
            "b3',b1,b3,b2'",
            "b1',b3',b2',b3",
        ];
        for k in 0..4 {
            assert_eq!(Word(g.row(k)[..4].to_vec()), w(rows[k]), "row {k}");
            assert_eq!(Word(g.column(k)[..4].to_vec()), w(cols[k]), "column {k}");
        }
        for j in 0..=4 {
            assert_eq!(g.row(j + 4), g.row(j));
        }
        for i in 0..=4 {
            assert_eq!(g.column(i + 4), g.column(i));
        }
        assert!(g.check_relations(pres.lattice()).unwrap());
    }

    #[test]
    fn empty_and_rejected() {
        let (pres, table) = setup();
        let g = tile_apartment(&pres, &table, &w("a1"), &w("b1"), 0, 0);
        assert!(matches!(g, Err(Error::NotPeriodicPair(_))));
        let g =
            tile_apartment(&pres, &table, &w("a1,a2',a1,a1"), &w("b3,b2',b3',b1"), 0, 0).unwrap();
        assert_eq!((g.width, g.height), (0, 0));
        assert!(g.h.is_empty());
        assert_eq!(g.v.len(), 1);
        let bad = tile_apartment(&pres, &table, &w("a1,b1"), &w("b1"), 2, 2);
        assert!(matches!(bad, Err(Error::NotPeriodicPair(_))));
    }
}
