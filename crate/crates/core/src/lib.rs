//! Binary MDS array codes with two parity columns and column height
//! `tau * (p - 1)`.
//!
//! A code is fixed by `(tau, p, k)`: `k` information columns, one row-parity
//! column and one diagonal-parity column that carries `t = min(k - 1, tau)`
//! common bits on its first `n_c` rows. Any two lost columns can be rebuilt.
//!
//! ```
//! use eoflex::{encode, decode, CodeArray, CodeParams, ErasurePattern};
//!
//! let params = CodeParams::new(2, 5, 3).unwrap();
//! let mut array = CodeArray::new(params, 16).unwrap();
//! array.load_info(b"any bytes at all, zero padded");
//! encode(&mut array);
//! let original = array.clone();
//!
//! array.clear_column(0);
//! array.clear_column(2);
//! decode(&mut array, &ErasurePattern::new(&params, &[0, 2]).unwrap()).unwrap();
//! assert_eq!(array, original);
//! ```

pub mod array;
pub mod baseline;
pub mod codec;
pub mod decoder;
pub mod error;
pub mod lane;
pub mod metrics;
pub mod oracle;
pub mod params;
pub mod shardio;

pub use array::{CodeArray, ErasurePattern};
pub use codec::{encode, update_cell};
pub use decoder::{decode, DecodeStats};
pub use error::{Error, Result};
pub use lane::{Lane, XorCounter};
pub use params::{validate_params, CodeParams, Regime};
