//! TDM1 decoding for every sampled kind.
//!
//! Kind-specific payloads following the common header:
//!
//! * LPN (`n` logical, `m` padded): recursive nodes. A leaf is tag `0u8`, its
//!   dimension `u64` and a dense payload; a composite is tag `1u8`, `dim`,
//!   `subdim`, child count `c` (all `u64`), the `c` blocks of `A`, the `c`
//!   blocks of `B`, then the sparse noise payload.
//! * McEliece (`n` logical, `m` padded): `n`, `k`, column count; per column the
//!   permutation as `n` `u32` indices, the generator as `b`, `r`, `c` and `r·c`
//!   first rows of `b` `u32` entries, then the scrambler (tag `0u8` + dense
//!   `k x k`, or tag `1u8` + a nested stacked body).
//! * Kac chain (`m` = T): T records `(i: u32, j: u32, cos: f64, sin: f64)`.
//! * Haar (`m` = left T): mode `u8` (0 two-sided, 1 symmetric), left records,
//!   `n` diagonal `f64`s, and for two-sided mode the right T `u64` and records.

use tdm_core::serial::{ByteReader, Header, Kind};

use crate::code::McElieceTrapdoor;
use crate::controls::DenseTrapdoor;
use crate::error::Result;
use crate::family::Sampled;
use crate::lpn::LpnTrapdoor;
use crate::real::{RealTrapdoor, RotationChain};

pub fn decode(bytes: &[u8]) -> Result<Sampled> {
    let mut r = ByteReader::new(bytes);
    let header = Header::read(&mut r)?;
    let out = match header.kind {
        Kind::LpnTrapdoor => Sampled::Field(Box::new(LpnTrapdoor::decode_body(&mut r, &header)?)),
        Kind::McElieceTrapdoor => {
            Sampled::Field(Box::new(McElieceTrapdoor::decode_body(&mut r, &header)?))
        }
        Kind::Dense => Sampled::Field(Box::new(DenseTrapdoor::decode_body(&mut r, &header)?)),
        Kind::KacChain => Sampled::Real(Box::new(RotationChain::decode_body(&mut r, &header)?)),
        Kind::HaarTrapdoor => Sampled::Real(Box::new(RealTrapdoor::decode_body(&mut r, &header)?)),
        other => {
            return Err(tdm_core::Error::Format(format!("{other:?} is not a trapdoor")).into());
        }
    };
    r.finish()?;
    Ok(out)
}
