//! Inter-lane shifts, the lane-group analogue of warp shuffles.

/// `out[t] = values[t - 1]` for `t >= 1`, `out[0] = fill`.
#[inline(always)]
pub fn lane_shift_up<T: Copy, const P: usize>(values: &[T; P], fill: T) -> [T; P] {
    let mut out = *values;
    shift_up_in_place(&mut out, fill);
    out
}

/// `out[t] = values[t + 1]` for `t < P - 1`, `out[P - 1] = fill`.
#[inline(always)]
pub fn lane_shift_down<T: Copy, const P: usize>(values: &[T; P], fill: T) -> [T; P] {
    let mut out = *values;
    shift_down_in_place(&mut out, fill);
    out
}

#[inline(always)]
pub(crate) fn shift_up_in_place<T: Copy>(v: &mut [T], fill: T) {
    let p = v.len();
    v.copy_within(0..p - 1, 1);
    v[0] = fill;
}

#[inline(always)]
pub(crate) fn shift_down_in_place<T: Copy>(v: &mut [T], fill: T) {
    let p = v.len();
    v.copy_within(1..p, 0);
    v[p - 1] = fill;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn shift_examples() {
        assert_eq!(lane_shift_up(&['a', 'b', 'c', 'd'], 'z'), ['z', 'a', 'b', 'c']);
        assert_eq!(lane_shift_down(&['a', 'b', 'c', 'd'], 'z'), ['b', 'c', 'd', 'z']);
    }

    proptest! {
        #[test]
        fn up_then_down_restores_interior(v in prop::array::uniform8(any::<i32>()), fill in any::<i32>()) {
            let back = lane_shift_down(&lane_shift_up(&v, fill), v[7]);
            prop_assert_eq!(back, v);
        }
    }
}
