use crate::scalar::Real;

/// Uniform grid with `ceil(horizon / max_step)` cells, merged with the
/// `extra` times that fall in `(0, horizon]`.
pub fn build_grid<T: Real>(horizon: T, max_step: T, extra: impl IntoIterator<Item = T>) -> Vec<T> {
    let cells = (horizon / max_step).ceil().to_usize().unwrap_or(1).max(1);
    let mut grid: Vec<T> = (0..=cells)
        .map(|k| horizon * T::from_usize_lossy(k) / T::from_usize_lossy(cells))
        .collect();
    grid.extend(extra.into_iter().filter(|&t| t > T::zero() && t <= horizon));
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid times"));
    grid.dedup();
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_dedups() {
        let g = build_grid(1.0, 0.3, [0.5, 0.5, 2.0, 0.0]);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = build_grid(1.0, 0.25, [0.1]);
        assert_eq!(g, vec![0.0, 0.1, 0.25, 0.5, 0.75, 1.0]);
    }
}
