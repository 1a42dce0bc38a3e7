//! Exact relations between quantum integers at `r = 7`.

use crate::cyclotomic::{CycNum, QContext};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: CycNum,
    pub rhs: CycNum,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `[5][3] = [3]+[5]`, `[2][4] = [3][5]`, `[2][3] = [4][5]`, `[2][6] = [5]`,
/// `[4][6] = [3]` and `[3]² = [4]²`, evaluated exactly in `Q(ζ_14)`.
pub fn order_seven_identities(ctx: &QContext) -> Result<Vec<IdentityCheck>> {
    if ctx.r() != 7 {
        return Err(Error::InvalidArgument(format!("identities are stated for r = 7, got r = {}", ctx.r())));
    }
    let q: Vec<CycNum> = (0..=6).map(|n| ctx.qint(n)).collect();
    let check = |name, lhs, rhs| IdentityCheck { name, lhs, rhs };
    Ok(vec![
        check("[5][3] = [3] + [5]", &q[5] * &q[3], &q[3] + &q[5]),
        check("[2][4] = [3][5]", &q[2] * &q[4], &q[3] * &q[5]),
        check("[2][3] = [4][5]", &q[2] * &q[3], &q[4] * &q[5]),
        check("[2][6] = [5]", &q[2] * &q[6], q[5].clone()),
        check("[4][6] = [3]", &q[4] * &q[6], q[3].clone()),
        check("[3]^2 = [4]^2", &q[3] * &q[3], &q[4] * &q[4]),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_hold_for_every_selector() {
        for m in QContext::valid_selectors(7) {
            let ctx = QContext::new(7, m as i64, 100).unwrap();
            for c in order_seven_identities(&ctx).unwrap() {
                assert!(c.holds(), "{} fails for m = {m}", c.name);
            }
        }
    }

    #[test]
    fn fails_off_order() {
        let ctx = QContext::new(9, 1, 100).unwrap();
        assert!(order_seven_identities(&ctx).is_err());
    }
}
