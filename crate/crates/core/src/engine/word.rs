//! Score words processed by one lane: a plain `i32`, a pair of saturating
//! 16-bit halves carrying two independent alignments, and an instrumented
//! `i32` that counts the arithmetic it performs.

use std::cell::Cell;

use crate::scoring::NEG_INF;

pub trait ScoreWord: Copy + Default + Send + Sync + 'static {
    /// Independent alignments carried per word.
    const HALVES: usize;
    fn splat(v: i32) -> Self;
    fn from_halves(f: impl Fn(usize) -> i32) -> Self;
    fn half(self, h: usize) -> i32;
    fn neg_inf() -> Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn max(self, o: Self) -> Self;
}

impl ScoreWord for i32 {
    const HALVES: usize = 1;

    #[inline(always)]
    fn splat(v: i32) -> Self {
        v
    }

    #[inline(always)]
    fn from_halves(f: impl Fn(usize) -> i32) -> Self {
        f(0)
    }

    #[inline(always)]
    fn half(self, _h: usize) -> i32 {
        self
    }

    #[inline(always)]
    fn neg_inf() -> Self {
        NEG_INF
    }

    #[inline(always)]
    fn add(self, o: Self) -> Self {
        self.wrapping_add(o)
    }

    #[inline(always)]
    fn sub(self, o: Self) -> Self {
        self.wrapping_sub(o)
    }

    #[inline(always)]
    fn max(self, o: Self) -> Self {
        Ord::max(self, o)
    }
}

/// Two 16-bit scores updated with saturating add/sub and elementwise max.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[repr(C, align(4))]
pub struct Packed16(pub [i16; 2]);

#[inline(always)]
fn sat16(v: i32) -> i16 {
    v.clamp(i16::MIN as i32, i16::MAX as i32) as i16
}

impl ScoreWord for Packed16 {
    const HALVES: usize = 2;

    #[inline(always)]
    fn splat(v: i32) -> Self {
        let v = sat16(v);
        Packed16([v, v])
    }

    #[inline(always)]
    fn from_halves(f: impl Fn(usize) -> i32) -> Self {
        Packed16([sat16(f(0)), sat16(f(1))])
    }

    #[inline(always)]
    fn half(self, h: usize) -> i32 {
        self.0[h] as i32
    }

    #[inline(always)]
    fn neg_inf() -> Self {
        Packed16([i16::MIN, i16::MIN])
    }

    #[inline(always)]
    fn add(self, o: Self) -> Self {
        Packed16([self.0[0].saturating_add(o.0[0]), self.0[1].saturating_add(o.0[1])])
    }

    #[inline(always)]
    fn sub(self, o: Self) -> Self {
        Packed16([self.0[0].saturating_sub(o.0[0]), self.0[1].saturating_sub(o.0[1])])
    }

    #[inline(always)]
    fn max(self, o: Self) -> Self {
        Packed16([self.0[0].max(o.0[0]), self.0[1].max(o.0[1])])
    }
}

thread_local! {
    static MAX_OPS: Cell<u64> = const { Cell::new(0) };
    static ADD_OPS: Cell<u64> = const { Cell::new(0) };
}

/// Arithmetic performed by [`Counted`] words on the current thread.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub max: u64,
    pub add_sub: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.max + self.add_sub
    }

    pub fn take() -> OpCounts {
        OpCounts {
            max: MAX_OPS.with(|c| c.replace(0)),
            add_sub: ADD_OPS.with(|c| c.replace(0)),
        }
    }
}

/// `i32` score that tallies every add/sub/max into thread-local counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counted(pub i32);

impl ScoreWord for Counted {
    const HALVES: usize = 1;

    fn splat(v: i32) -> Self {
        Counted(v)
    }

    fn from_halves(f: impl Fn(usize) -> i32) -> Self {
        Counted(f(0))
    }

    fn half(self, _h: usize) -> i32 {
        self.0
    }

    fn neg_inf() -> Self {
        Counted(NEG_INF)
    }

    fn add(self, o: Self) -> Self {
        ADD_OPS.with(|c| c.set(c.get() + 1));
        Counted(self.0 + o.0)
    }

    fn sub(self, o: Self) -> Self {
        ADD_OPS.with(|c| c.set(c.get() + 1));
        Counted(self.0 - o.0)
    }

    fn max(self, o: Self) -> Self {
        MAX_OPS.with(|c| c.set(c.get() + 1));
        Counted(Ord::max(self.0, o.0))
    }
}
