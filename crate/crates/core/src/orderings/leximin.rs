use std::cmp::Ordering;

use crate::profile::WellbeingProfile;
use crate::verdict::Verdict;

/// Same-population leximin: compare worst-off first, then the next worst-off,
/// and so on. Profiles of different sizes are incomparable.
pub fn leximin_compare(u: &WellbeingProfile, v: &WellbeingProfile) -> Verdict {
    if u.len() != v.len() {
        return Verdict::Incomparable;
    }
    let ru = u.rank();
    let rv = v.rank();
    let mut a = ru.blocks().iter();
    let mut b = rv.blocks().iter();
    let (mut cur_a, mut cur_b) = (a.next(), b.next());
    let (mut left_a, mut left_b) = (cur_a.map_or(0, |x| x.count), cur_b.map_or(0, |x| x.count));
    while let (Some(x), Some(y)) = (cur_a, cur_b) {
        match x.level.cmp(&y.level) {
            Ordering::Greater => return Verdict::StrictlyBetter,
            Ordering::Less => return Verdict::StrictlyWorse,
            Ordering::Equal => {}
        }
        let step = left_a.min(left_b);
        left_a -= step;
        left_b -= step;
        if left_a == 0 {
            cur_a = a.next();
            left_a = cur_a.map_or(0, |x| x.count);
        }
        if left_b == 0 {
            cur_b = b.next();
            left_b = cur_b.map_or(0, |x| x.count);
        }
    }
    Verdict::Equivalent
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(values: &[i64]) -> WellbeingProfile {
        WellbeingProfile::from_ints(values).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(leximin_compare(&p(&[1, 2, 3]), &p(&[3, 2, 1])), Verdict::Equivalent);
        assert_eq!(leximin_compare(&p(&[1, 2, 3]), &p(&[1, 1, 5])), Verdict::StrictlyBetter);
        assert_eq!(leximin_compare(&p(&[0, 9]), &p(&[1, 1])), Verdict::StrictlyWorse);
        assert_eq!(leximin_compare(&p(&[1, 2]), &p(&[1, 2, 3])), Verdict::Incomparable);
    }

    #[test]
    fn blocks_of_different_shape() {
        let u: WellbeingProfile = "3*1, 2*5".parse().unwrap();
        let v: WellbeingProfile = "1, 1, 1, 5, 4".parse().unwrap();
        assert_eq!(leximin_compare(&u, &v), Verdict::StrictlyBetter);
        let big_u: WellbeingProfile = "1000000*2".parse().unwrap();
        let big_v: WellbeingProfile = "999999*2, 3".parse().unwrap();
        assert_eq!(leximin_compare(&big_u, &big_v), Verdict::StrictlyWorse);
    }
}
