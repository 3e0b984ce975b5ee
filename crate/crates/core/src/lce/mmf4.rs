// Copyright 2026 The lcdiscard Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The MMF4 saturating curve family `f(x) = (a*b + c*x^d) / (b + x^d)`.

use serde::{Deserialize, Serialize};

use super::LceError;

/// `a` is the value approached as `x -> 0`, `c` the asymptote as `x -> inf`
/// (for `d > 0`), `b` and `d` set where and how fast the transition happens.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mmf4Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mmf4Params {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, LceError> {
        let params = Self { a, b, c, d };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), LceError> {
        let finite = [self.a, self.b, self.c, self.d].iter().all(|v| v.is_finite());
        if !finite || self.b <= 0.0 {
            return Err(LceError::InvalidParams(*self));
        }
        Ok(())
    }

    pub fn eval(&self, epoch: f64) -> f64 {
        self.c + (self.a - self.c) * self.weight_of_power(epoch.powf(self.d))
    }

    /// Evaluates at `exp(ln_epoch)`; lets hot loops precompute the logs.
    #[inline]
    pub fn eval_ln(&self, ln_epoch: f64) -> f64 {
        self.c + (self.a - self.c) * self.weight_ln(ln_epoch)
    }

    /// `b / (b + x^d)`, the share of `a` in the mix. Saturates to 0 or 1
    /// instead of producing NaN when `x^d` leaves the representable range.
    #[inline]
    pub(crate) fn weight_ln(&self, ln_epoch: f64) -> f64 {
        self.weight_of_power((self.d * ln_epoch).exp())
    }

    #[inline]
    fn weight_of_power(&self, p: f64) -> f64 {
        if p.is_infinite() {
            0.0
        } else {
            self.b / (self.b + p)
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self {
            a: v[0],
            b: v[1],
            c: v[2],
            d: v[3],
        }
    }
}

pub fn mmf4_eval(params: &Mmf4Params, epoch: f64) -> f64 {
    params.eval(epoch)
}
