/// Arithmetic in `Z_p` for a prime `p < 256`.
pub(crate) fn inv(a: u8, p: u8) -> u8 {
    debug_assert!(a % p != 0);
    pow(a, p as u32 - 2, p)
}

pub(crate) fn pow(a: u8, mut e: u32, p: u8) -> u8 {
    let p = p as u32;
    let mut base = a as u32 % p;
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc as u8
}

pub(crate) fn add(a: u8, b: u8, p: u8) -> u8 {
    ((a as u32 + b as u32) % p as u32) as u8
}

pub(crate) fn sub(a: u8, b: u8, p: u8) -> u8 {
    ((a as u32 + p as u32 - (b as u32 % p as u32)) % p as u32) as u8
}

pub(crate) fn mul(a: u8, b: u8, p: u8) -> u8 {
    ((a as u32 * b as u32) % p as u32) as u8
}

/// Reduced row echelon form in place, pivots chosen leftmost. Rows carry
/// `cols` coefficients followed by an optional right-hand side. Returns the
/// pivot column of each pivot row. Rows past the pivot rows are zero in
/// the coefficient part.
pub(crate) fn rref(rows: &mut Vec<Vec<u8>>, cols: usize, p: u8) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let f = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = mul(*x, f, p);
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let f = rows[k][c];
                for t in 0..rows[k].len() {
                    let v = mul(f, rows[r][t], p);
                    rows[k][t] = sub(rows[k][t], v, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        for p in [2u8, 3, 5, 7, 11, 13] {
            for a in 1..p {
                assert_eq!(mul(a, inv(a, p), p), 1);
            }
        }
    }
}
