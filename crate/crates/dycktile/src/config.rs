/// Practical size caps.  These are configuration values, not hard limits of
/// the algorithms; the defaults keep full-matrix work and brute-force
/// enumeration comfortably inside interactive time budgets.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Largest `n` for which the full Catalan(n) x Catalan(n) matrix is built.
    pub max_matrix_n: usize,
    /// Largest edge count accepted by the exact matching enumerator.
    pub max_oracle_edges: usize,
    /// Largest vertex count accepted by the spanning-forest enumerator.
    pub max_oracle_vertices: usize,
    /// Largest truncation order for the continued-fraction expansion.
    pub max_series_order: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_matrix_n: 10,
            max_oracle_edges: 40,
            max_oracle_vertices: 12,
            max_series_order: 24,
        }
    }
}

impl Caps {
    /// Default caps with `max_matrix_n` overridden (e.g. from `DYCKTILE_MAX_N`).
    pub fn with_max_n(max_matrix_n: usize) -> Self {
        Caps {
            max_matrix_n,
            ..Caps::default()
        }
    }
}
