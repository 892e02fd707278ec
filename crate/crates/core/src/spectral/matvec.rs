use super::{MatrixKind, SpectralConfig};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Chunks per column block; one block's tables (512 KiB) stay in cache
/// while every row is swept.
const BLOCK_CHUNKS: usize = 256;

/// Adjacency product `A x` from the bit rows, one byte of a row at a time.
///
/// For every 8-column chunk a 256-entry table of partial sums of `x` is
/// built once per product, so each row costs `n / 8` lookups. Columns are
/// processed in blocks small enough for the tables to stay cached. Every
/// entry of the result is summed in increasing chunk order, independent of
/// how rows are scheduled.
pub(crate) fn adjacency_product(g: &Graph, x: &[f64], tables: &mut Vec<f64>, y: &mut [f64]) {
    let n = g.n();
    let chunks = n.div_ceil(8);
    tables.clear();
    tables.resize(chunks * 256, 0.0);
    for c in 0..chunks {
        let t = &mut tables[c * 256..(c + 1) * 256];
        for b in 1..256usize {
            let low = b.trailing_zeros() as usize;
            let col = c * 8 + low;
            t[b] = t[b & (b - 1)] + if col < n { x[col] } else { 0.0 };
        }
    }
    y.fill(0.0);
    for c0 in (0..chunks).step_by(BLOCK_CHUNKS) {
        let c1 = (c0 + BLOCK_CHUNKS).min(chunks);
        let (w0, w1) = (c0 / 8, c1.div_ceil(8));
        let block = &tables[c0 * 256..c1 * 256];
        for (i, yi) in y.iter_mut().enumerate() {
            let words = &g.row(i)[w0..w1];
            let mut acc = 0.0;
            for (w, &word) in words.iter().enumerate() {
                for byte in 0..8 {
                    let c = w * 8 + byte;
                    if c0 + c >= c1 {
                        break;
                    }
                    acc += block[c * 256 + ((word >> (8 * byte)) & 0xff) as usize];
                }
            }
            *yi += acc;
        }
    }
}

/// Matrix-free operator for one graph and configuration.
pub struct Operator<'a> {
    g: &'a Graph,
    cfg: SpectralConfig,
    tables: Vec<f64>,
    inv_sqrt_n: f64,
}

impl<'a> Operator<'a> {
    pub fn new(g: &'a Graph, cfg: &SpectralConfig) -> Result<Self> {
        cfg.validate(g.n())?;
        Ok(Self {
            g,
            cfg: cfg.clone(),
            tables: Vec::new(),
            inv_sqrt_n: 1.0 / (g.n().max(1) as f64).sqrt(),
        })
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn apply(&mut self, x: &[f64], y: &mut [f64]) -> Result<()> {
        let n = self.g.n();
        if x.len() != n || y.len() != n {
            return Err(Error::invalid(format!(
                "vector lengths {} and {} do not match graph order {n}",
                x.len(),
                y.len()
            )));
        }
        adjacency_product(self.g, x, &mut self.tables, y);
        match self.cfg.matrix_kind {
            MatrixKind::ZeroOneScaled => {
                for yi in y.iter_mut() {
                    *yi *= self.inv_sqrt_n;
                }
            }
            MatrixKind::PlusMinus { scaled } => {
                let sum: f64 = x.iter().sum();
                let s = if scaled { self.inv_sqrt_n } else { 1.0 };
                for (yi, &xi) in y.iter_mut().zip(x) {
                    *yi = (2.0 * *yi - (sum - xi)) * s;
                }
            }
        }
        if let Some(h) = self.cfg.hint_site {
            y[h] += self.cfg.e0 * x[h];
        }
        Ok(())
    }

    /// Frobenius norm of the operator's matrix.
    pub fn frobenius(&self) -> f64 {
        let n = self.g.n() as f64;
        let off = match self.cfg.matrix_kind {
            MatrixKind::ZeroOneScaled => 2.0 * self.g.edge_count() as f64 / n,
            MatrixKind::PlusMinus { scaled: false } => n * (n - 1.0),
            MatrixKind::PlusMinus { scaled: true } => n - 1.0,
        };
        let diag = if self.cfg.hint_site.is_some() { self.cfg.e0 * self.cfg.e0 } else { 0.0 };
        (off + diag).sqrt()
    }
}

/// Matrix-free product `M x` for the matrix selected by `cfg`.
pub fn matvec(g: &Graph, cfg: &SpectralConfig, x: &[f64]) -> Result<Vec<f64>> {
    let mut op = Operator::new(g, cfg)?;
    let mut y = vec![0.0; x.len()];
    op.apply(x, &mut y)?;
    Ok(y)
}
