//! Collection from the left.
//!
//! The collector keeps the collected prefix as a dense exponent vector and
//! a stack of pending letters. Multiplying the prefix `P g_i^a S` (with `S`
//! in later generators) by `g_i` yields `P g_i^{a+1} S^{g_i}`; the
//! conjugated suffix is pushed back onto the stack letter by letter.
//! Generators at index `central_from` and beyond are central and are
//! simply added in place.

use super::{PcPresentation, PcpError, SparseWord};

#[derive(Debug, Clone, Default)]
pub(crate) struct Tables {
    pub(crate) central_from: usize,
    pow: Vec<SparseWord>,
    pow_inv: Vec<SparseWord>,
    // indexed by k * central_from + i for i < k < central_from
    commutes: Vec<bool>,
    conj: Vec<SparseWord>,
    conj_inv: Vec<SparseWord>,
    // conjugates by g_i^-1, only filled for infinite g_i
    invconj: Vec<SparseWord>,
    invconj_inv: Vec<SparseWord>,
}

fn invert(w: &[(usize, i64)]) -> SparseWord {
    w.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

impl Tables {
    #[inline]
    fn at(&self, k: usize, i: usize) -> usize {
        k * self.central_from + i
    }

    pub(crate) fn commutes(&self, k: usize, i: usize) -> bool {
        self.commutes[self.at(k, i)]
    }

    pub(crate) fn build(p: &PcPresentation) -> Result<Tables, PcpError> {
        let n = p.n();
        let mut involved = vec![false; n];
        for &(j, i) in p.comm_tails.keys() {
            involved[j] = true;
            involved[i] = true;
        }
        let cf = involved.iter().rposition(|&x| x).map_or(0, |k| k + 1);
        let mut pow = vec![Vec::new(); n];
        for (&i, w) in &p.power_tails {
            pow[i] = w.clone();
        }
        let pow_inv = pow.iter().map(|w| invert(w)).collect();
        let mut t = Tables {
            central_from: cf,
            pow,
            pow_inv,
            commutes: vec![true; cf * cf],
            conj: vec![Vec::new(); cf * cf],
            conj_inv: vec![Vec::new(); cf * cf],
            invconj: vec![Vec::new(); cf * cf],
            invconj_inv: vec![Vec::new(); cf * cf],
        };
        for k in 0..cf {
            for i in 0..k {
                let rhs = p.commutator_rhs(k, i);
                let mut w = vec![(k, 1)];
                w.extend_from_slice(rhs);
                let at = t.at(k, i);
                t.commutes[at] = rhs.is_empty();
                t.conj_inv[at] = invert(&w);
                t.conj[at] = w;
            }
        }
        // g_i w g_i^-1 for infinite g_i, from the top down: if
        // g_k^{g_i} = g_k c then g_k^{g_i^-1} = g_k (c^-1)^{g_i^-1}.
        for i in (0..cf).rev() {
            if p.rel_orders[i] != 0 {
                continue;
            }
            for k in (i + 1..cf).rev() {
                let rhs = p.commutator_rhs(k, i);
                let mut word: SparseWord = Vec::new();
                for &(l, x) in rhs.iter().rev() {
                    if l >= cf {
                        word.push((l, -x));
                        continue;
                    }
                    let at = t.at(l, i);
                    let (w, reps) = if x > 0 {
                        (&t.invconj_inv[at], x)
                    } else {
                        (&t.invconj[at], -x)
                    };
                    for _ in 0..reps {
                        word.extend_from_slice(w);
                    }
                }
                let mut z = vec![0; n];
                collect_into(p, &t, &mut z, &word)?;
                let mut w = vec![(k, 1)];
                w.extend(z.iter().enumerate().filter(|(_, &e)| e != 0).map(|(g, &e)| (g, e)));
                let at = t.at(k, i);
                t.invconj_inv[at] = invert(&w);
                t.invconj[at] = w;
            }
        }
        Ok(t)
    }
}

#[inline]
fn push_word(stack: &mut Vec<(usize, i64)>, w: &[(usize, i64)]) {
    stack.extend(w.iter().rev().copied());
}

fn add_central(p: &PcPresentation, t: &Tables, r: &mut [i64], i: usize, e: i64) -> Result<(), PcpError> {
    r[i] = r[i].checked_add(e).ok_or(PcpError::Overflow)?;
    let mut hi = i;
    let mut idx = i;
    while idx <= hi {
        let m = p.rel_orders[idx];
        if m > 0 && !(0..m).contains(&r[idx]) {
            let q = r[idx].div_euclid(m);
            r[idx] = r[idx].rem_euclid(m);
            for &(g, x) in &t.pow[idx] {
                let add = q.checked_mul(x).ok_or(PcpError::Overflow)?;
                r[g] = r[g].checked_add(add).ok_or(PcpError::Overflow)?;
                hi = hi.max(g);
            }
        }
        idx += 1;
    }
    Ok(())
}

fn take_noncentral(r: &mut [i64], from: usize, to: usize) -> SparseWord {
    let mut out = Vec::new();
    for (k, slot) in r.iter_mut().enumerate().take(to).skip(from) {
        if *slot != 0 {
            out.push((k, *slot));
            *slot = 0;
        }
    }
    out
}

pub(crate) fn collect_into(
    p: &PcPresentation,
    t: &Tables,
    r: &mut [i64],
    word: &[(usize, i64)],
) -> Result<(), PcpError> {
    let cf = t.central_from;
    let mut stack: Vec<(usize, i64)> = word.iter().rev().copied().collect();
    while let Some((i, e)) = stack.pop() {
        if e == 0 {
            continue;
        }
        if i >= cf {
            add_central(p, t, r, i, e)?;
            continue;
        }
        let m = p.rel_orders[i];
        if e < 0 && m > 0 {
            // g_i^e = g_i^rem (g_i^m)^q, and g_i^m commutes with g_i
            let (q, rem) = (e.div_euclid(m), e.rem_euclid(m));
            for _ in 0..q.unsigned_abs() {
                push_word(&mut stack, &t.pow_inv[i]);
            }
            if rem != 0 {
                stack.push((i, rem));
            }
            continue;
        }
        let blocked = (i + 1..cf).any(|k| r[k] != 0 && !t.commutes(k, i));
        if !blocked {
            let s = r[i].checked_add(e).ok_or(PcpError::Overflow)?;
            if m > 0 && s >= m {
                r[i] = s % m;
                let suffix = take_noncentral(r, i + 1, cf);
                push_word(&mut stack, &suffix);
                for _ in 0..s / m {
                    push_word(&mut stack, &t.pow[i]);
                }
            } else {
                r[i] = s;
            }
            continue;
        }
        let sign = e.signum();
        if e != sign {
            stack.push((i, e - sign));
        }
        let suffix = take_noncentral(r, i + 1, cf);
        for &(k, s) in suffix.iter().rev() {
            let at = t.at(k, i);
            let (fwd, back) = if sign > 0 {
                (&t.conj[at], &t.conj_inv[at])
            } else {
                (&t.invconj[at], &t.invconj_inv[at])
            };
            let w = if s > 0 { fwd } else { back };
            for _ in 0..s.unsigned_abs() {
                push_word(&mut stack, w);
            }
        }
        if sign > 0 {
            r[i] += 1;
            if m > 0 && r[i] == m {
                r[i] = 0;
                push_word(&mut stack, &t.pow[i]);
            }
        } else {
            r[i] = r[i].checked_sub(1).ok_or(PcpError::Overflow)?;
        }
    }
    Ok(())
}
