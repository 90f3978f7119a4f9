use num_complex::Complex64;

pub const NUM_SUBCARRIERS: usize = 12;
pub const NUM_SYMBOLS: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    Data,
    Dmrs,
    Empty,
}

/// One resource-block pair: 12 subcarriers by 14 OFDM symbols, each cell
/// tagged with what it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceGrid {
    cells: Vec<Complex64>,
    kinds: Vec<CellKind>,
}

impl Default for ResourceGrid {
    fn default() -> Self {
        Self::new()
    }
}

impl ResourceGrid {
    pub fn new() -> Self {
        Self {
            cells: vec![Complex64::new(0.0, 0.0); NUM_SUBCARRIERS * NUM_SYMBOLS],
            kinds: vec![CellKind::Empty; NUM_SUBCARRIERS * NUM_SYMBOLS],
        }
    }

    #[inline]
    fn idx(subcarrier: usize, symbol: usize) -> usize {
        debug_assert!(subcarrier < NUM_SUBCARRIERS && symbol < NUM_SYMBOLS);
        symbol * NUM_SUBCARRIERS + subcarrier
    }

    pub fn get(&self, subcarrier: usize, symbol: usize) -> Complex64 {
        self.cells[Self::idx(subcarrier, symbol)]
    }

    pub fn kind(&self, subcarrier: usize, symbol: usize) -> CellKind {
        self.kinds[Self::idx(subcarrier, symbol)]
    }

    pub fn set(&mut self, subcarrier: usize, symbol: usize, value: Complex64, kind: CellKind) {
        let i = Self::idx(subcarrier, symbol);
        self.cells[i] = value;
        self.kinds[i] = kind;
    }

    /// Symbol-major view of all cell values.
    pub fn cells(&self) -> &[Complex64] {
        &self.cells
    }

    pub fn cells_mut(&mut self) -> &mut [Complex64] {
        &mut self.cells
    }

    pub fn count(&self, kind: CellKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    /// Symbols whose twelve cells are all of `kind`.
    pub fn symbols_of(&self, kind: CellKind) -> Vec<usize> {
        (0..NUM_SYMBOLS)
            .filter(|&l| (0..NUM_SUBCARRIERS).all(|k| self.kind(k, l) == kind))
            .collect()
    }

    /// Returns a copy with the cell tags kept and values replaced.
    pub fn with_values(&self, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), self.cells.len());
        Self {
            cells: values,
            kinds: self.kinds.clone(),
        }
    }

    pub fn same_layout(&self, other: &ResourceGrid) -> bool {
        self.kinds == other.kinds
    }
}
