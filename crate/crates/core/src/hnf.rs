//! Row-style Hermite normal form over arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Computes the row Hermite normal form of `rows` (all of equal length).
///
/// The returned rows are the nonzero rows of the HNF: upper-staircase, with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
/// They generate the same ℤ-module as the input rows.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let ncols = a.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    let mut pivots: Vec<(usize, usize)> = Vec::new();

    for col in 0..ncols {
        if pivot_row == a.len() {
            break;
        }
        loop {
            // Row with the smallest nonzero magnitude in this column becomes the pivot.
            let best = (pivot_row..a.len())
                .filter(|&i| !a[i][col].is_zero())
                .min_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()));
            let Some(best) = best else { break };
            a.swap(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[pivot_row][col]);
                let (head, tail) = a.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[pivot_row], &q);
                if !tail[0][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[pivot_row][col].is_zero() {
            continue;
        }
        if a[pivot_row][col].is_negative() {
            for x in a[pivot_row].iter_mut() {
                *x = -x.clone();
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }
    a.truncate(pivot_row);

    for &(r, c) in &pivots {
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                let (head, tail) = a.split_at_mut(r);
                sub_multiple(&mut head[i], &tail[0], &q);
            }
        }
    }
    a
}

fn sub_multiple(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}
