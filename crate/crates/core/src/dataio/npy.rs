//! NPY v1.0 encoding of square `f32` fields.

use super::DataError;
use crate::field::Field;

pub const MAGIC: &[u8; 6] = b"\x93NUMPY";

/// Header dictionary for a C-ordered little-endian `f32` array.
fn header_dict(res: usize) -> String {
    format!("{{'descr': '<f4', 'fortran_order': False, 'shape': ({res}, {res}), }}")
}

/// NPY v1.0 bytes: magic, version, header padded with spaces to a 64-byte
/// boundary and closed by a newline, then row-major data.
pub fn encode(field: &Field) -> Vec<u8> {
    let mut header = header_dict(field.res());
    let unpadded = MAGIC.len() + 2 + 2 + header.len() + 1;
    header.push_str(&" ".repeat((64 - unpadded % 64) % 64));
    header.push('\n');
    let mut out = Vec::with_capacity(10 + header.len() + 4 * field.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&[1, 0]);
    out.extend_from_slice(&(header.len() as u16).to_le_bytes());
    out.extend_from_slice(header.as_bytes());
    for v in field.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn bad(msg: impl Into<String>) -> DataError {
    DataError::Npy(msg.into())
}

/// Value text of `'key': value` in a header dictionary.
fn dict_value<'a>(header: &'a str, key: &str) -> Result<&'a str, DataError> {
    let pat = format!("'{key}':");
    let start = header.find(&pat).ok_or_else(|| bad(format!("header lacks {key}")))? + pat.len();
    let rest = header[start..].trim_start();
    let end = if rest.starts_with('(') {
        rest.find(')').map(|e| e + 1)
    } else {
        rest.find([',', '}'])
    }
    .ok_or_else(|| bad(format!("unterminated {key}")))?;
    Ok(rest[..end].trim())
}

/// Decodes a 2D square `'<f4'` C-ordered array (versions 1.0 to 3.0).
pub fn decode(bytes: &[u8]) -> Result<Field, DataError> {
    if bytes.len() < 10 || &bytes[..6] != MAGIC {
        return Err(bad("missing NPY magic"));
    }
    let (hlen, hstart) = match bytes[6] {
        1 => (usize::from(u16::from_le_bytes([bytes[8], bytes[9]])), 10),
        2 | 3 if bytes.len() >= 12 => {
            (u32::from_le_bytes([bytes[8], bytes[9], bytes[10], bytes[11]]) as usize, 12)
        }
        v => return Err(bad(format!("unsupported NPY version {v}"))),
    };
    let data_start = hstart + hlen;
    let header = bytes
        .get(hstart..data_start)
        .and_then(|h| std::str::from_utf8(h).ok())
        .ok_or_else(|| bad("truncated header"))?;
    let descr = dict_value(header, "descr")?;
    if descr != "'<f4'" {
        return Err(bad(format!("dtype {descr}, expected '<f4'")));
    }
    if dict_value(header, "fortran_order")? != "False" {
        return Err(bad("fortran-ordered arrays are not supported"));
    }
    let shape = dict_value(header, "shape")?;
    let dims: Vec<usize> = shape
        .trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| bad(format!("bad shape {shape}"))))
        .collect::<Result<_, _>>()?;
    let res = match dims[..] {
        [a, b] if a == b => a,
        _ => return Err(bad(format!("shape {shape} is not square 2D"))),
    };
    let data = &bytes[data_start..];
    if data.len() != 4 * res * res {
        return Err(bad(format!("data segment is {} bytes, expected {}", data.len(), 4 * res * res)));
    }
    let vals = data.chunks_exact(4).map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect();
    Ok(Field::from_vec(res, vals))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_64_aligned_and_matches_numpy() {
        let bytes = encode(&Field::zeros(256));
        let hlen = usize::from(u16::from_le_bytes([bytes[8], bytes[9]]));
        assert_eq!((10 + hlen) % 64, 0);
        assert_eq!(bytes.len() - 10 - hlen, 262_144);
        let header = std::str::from_utf8(&bytes[10..10 + hlen]).unwrap();
        assert!(header.starts_with("{'descr': '<f4', 'fortran_order': False, 'shape': (256, 256), }"));
        assert!(header.ends_with(" \n"));
        assert_eq!(&bytes[..8], b"\x93NUMPY\x01\x00");
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let f = Field::from_vec(3, vec![0.0, -0.0, 1.5, f32::MIN_POSITIVE, f32::MAX, -7.25, 1e-30, 3.0, f32::EPSILON]);
        let g = decode(&encode(&f)).unwrap();
        let bits = |f: &Field| f.data().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&f), bits(&g));
    }

    #[test]
    fn rejects_foreign_dtypes() {
        let mut b = encode(&Field::zeros(2));
        let pos = b.windows(3).position(|w| w == b"<f4").unwrap();
        b[pos + 2] = b'8';
        assert!(matches!(decode(&b), Err(DataError::Npy(m)) if m.contains("dtype")));
        assert!(decode(b"not an npy").is_err());
    }
}
