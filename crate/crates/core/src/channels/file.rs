//! JSON channel files.
//!
//! ```json
//! { "dim_in": 2, "dim_out": 2,
//!   "kraus": [ [ [[1.0, 0.0], [0.0, 0.0]],
//!                [[0.0, 0.0], [1.0, 0.0]] ] ] }
//! ```
//!
//! `kraus` is a list of operators; each operator is a list of `dim_out` rows;
//! each row is a list of `dim_in` entries `[re, im]`. The loader rejects files
//! whose operators have the wrong shape or are not trace preserving within
//! `TAU_NUM`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::KrausChannel;
use crate::error::{Error, Result};
use crate::qnum::{c, CMatrix};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelFile {
    pub fn from_channel(ch: &KrausChannel) -> Self {
        let kraus = ch
            .kraus_ops()
            .iter()
            .map(|k| {
                (0..k.nrows())
                    .map(|r| (0..k.ncols()).map(|col| [k[(r, col)].re, k[(r, col)].im]).collect())
                    .collect()
            })
            .collect();
        Self {
            dim_in: ch.dim_in(),
            dim_out: ch.dim_out(),
            kraus,
        }
    }

    pub fn to_channel(&self) -> Result<KrausChannel> {
        if self.dim_in == 0 || self.dim_out == 0 {
            return Err(Error::InvalidChannel("dimensions must be positive".into()));
        }
        let mut ops = Vec::with_capacity(self.kraus.len());
        for (i, rows) in self.kraus.iter().enumerate() {
            if rows.len() != self.dim_out || rows.iter().any(|r| r.len() != self.dim_in) {
                return Err(Error::InvalidChannel(format!(
                    "Kraus operator {i} is not {} x {}",
                    self.dim_out, self.dim_in
                )));
            }
            if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
                return Err(Error::InvalidChannel(format!("Kraus operator {i} has non-finite entries")));
            }
            ops.push(CMatrix::from_fn(self.dim_out, self.dim_in, |r, col| {
                let [re, im] = rows[r][col];
                c(re, im)
            }));
        }
        KrausChannel::new(ops)
    }
}

pub fn parse_channel(text: &str) -> Result<KrausChannel> {
    let file: ChannelFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_channel()
}

pub fn load_channel(path: &Path) -> Result<KrausChannel> {
    parse_channel(&std::fs::read_to_string(path)?)
}

pub fn channel_to_json(ch: &KrausChannel) -> String {
    serde_json::to_string_pretty(&ChannelFile::from_channel(ch)).expect("channel file serializes")
}

pub fn save_channel(ch: &KrausChannel, path: &Path) -> Result<()> {
    std::fs::write(path, channel_to_json(ch) + "\n")?;
    Ok(())
}
