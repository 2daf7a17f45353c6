//! Cast-free 32-bit marshaling.
//!
//! Values go to the wire in big-endian order, one byte at a time via shifts
//! and bitmasks — no pointer casts, no memcpy.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarshalError {
    #[error("buffer too small: need 4 bytes at offset {offset}, size is {size}")]
    InsufficientBuffer { offset: usize, size: usize },
}

/// Write the four big-endian bytes of `src` at `dest[at..at + 4]`.
///
/// The destination range is a checked precondition: the caller guarantees
/// `at + 4 <= dest.len()`. No other byte is touched.
pub fn copy_u32(src: u32, dest: &mut [u8], at: usize) {
    assert!(
        at.checked_add(4).is_some_and(|end| end <= dest.len()),
        "copy_u32: need 4 bytes at offset {at}, buffer holds {}",
        dest.len()
    );
    dest[at] = ((src >> 24) & 0xff) as u8;
    dest[at + 1] = ((src >> 16) & 0xff) as u8;
    dest[at + 2] = ((src >> 8) & 0xff) as u8;
    dest[at + 3] = (src & 0xff) as u8;
}

/// Marshal `value` at `*offset`, advancing the offset by 4 on success.
///
/// A too-small buffer is a reported error, not a fault, and leaves both the
/// buffer and the offset untouched.
pub fn marshal_u32(value: u32, dest: &mut [u8], offset: &mut usize) -> Result<(), MarshalError> {
    if offset.checked_add(4).is_none_or(|end| end > dest.len()) {
        return Err(MarshalError::InsufficientBuffer {
            offset: *offset,
            size: dest.len(),
        });
    }
    copy_u32(value, dest, *offset);
    *offset += 4;
    Ok(())
}

/// Read a big-endian u32 at `*offset`, advancing the offset by 4.
pub fn unmarshal_u32(src: &[u8], offset: &mut usize) -> Result<u32, MarshalError> {
    if offset.checked_add(4).is_none_or(|end| end > src.len()) {
        return Err(MarshalError::InsufficientBuffer {
            offset: *offset,
            size: src.len(),
        });
    }
    let at = *offset;
    let value = ((src[at] as u32) << 24)
        | ((src[at + 1] as u32) << 16)
        | ((src[at + 2] as u32) << 8)
        | (src[at + 3] as u32);
    *offset += 4;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: repeated divmod-by-256 decomposition, least
    // significant byte first, then reversed into wire order.
    fn be_bytes_oracle(mut v: u32) -> [u8; 4] {
        let mut out = [0u8; 4];
        for k in (0..4).rev() {
            out[k] = (v % 256) as u8;
            v /= 256;
        }
        out
    }

    #[test]
    fn copy_u32_examples() {
        let mut buf = [0xEEu8; 4];
        copy_u32(0, &mut buf, 0);
        assert_eq!(buf, [0, 0, 0, 0]);

        copy_u32(0x0102_0304, &mut buf, 0);
        assert_eq!(buf, [0x01, 0x02, 0x03, 0x04]);
        assert_eq!(buf, be_bytes_oracle(0x0102_0304));

        copy_u32(0xFFFF_FFFF, &mut buf, 0);
        assert_eq!(buf, [0xFF; 4]);
    }

    #[test]
    fn copy_u32_at_offset_frames_neighbors() {
        let mut buf = [0xEEu8; 8];
        copy_u32(0xAABB_CCDD, &mut buf, 2);
        assert_eq!(buf, [0xEE, 0xEE, 0xAA, 0xBB, 0xCC, 0xDD, 0xEE, 0xEE]);
    }

    #[test]
    #[should_panic(expected = "copy_u32")]
    fn copy_u32_contract_violation_faults() {
        let mut buf = [0u8; 4];
        copy_u32(1, &mut buf, 1);
    }

    #[test]
    fn marshal_success() {
        let mut buf = [0u8; 4];
        let mut offset = 0;
        marshal_u32(0xAABB_CCDD, &mut buf, &mut offset).unwrap();
        assert_eq!(buf, [0xAA, 0xBB, 0xCC, 0xDD]);
        assert_eq!(buf, be_bytes_oracle(0xAABB_CCDD));
        assert_eq!(offset, 4);
    }

    #[test]
    fn marshal_failure_is_atomic() {
        let mut buf = [0x11u8; 4];
        let mut offset = 1;
        let err = marshal_u32(0xAABB_CCDD, &mut buf, &mut offset).unwrap_err();
        assert_eq!(err, MarshalError::InsufficientBuffer { offset: 1, size: 4 });
        assert_eq!(buf, [0x11; 4]);
        assert_eq!(offset, 1);
    }

    #[test]
    fn marshal_twice_appends() {
        let mut buf = [0u8; 8];
        let mut offset = 0;
        marshal_u32(1, &mut buf, &mut offset).unwrap();
        marshal_u32(2, &mut buf, &mut offset).unwrap();
        assert_eq!(buf, [0, 0, 0, 1, 0, 0, 0, 2]);
        assert_eq!(offset, 8);
    }

    #[test]
    fn unmarshal_examples() {
        let mut offset = 0;
        assert_eq!(unmarshal_u32(&[0, 0, 0, 0], &mut offset), Ok(0));
        assert_eq!(offset, 4);

        let mut offset = 0;
        assert_eq!(
            unmarshal_u32(&[0x01, 0x02, 0x03, 0x04], &mut offset),
            Ok(0x0102_0304)
        );

        let mut offset = 2;
        assert!(unmarshal_u32(&[0, 0, 0, 0, 0], &mut offset).is_err());
        assert_eq!(offset, 2);
    }

    #[test]
    fn wire_order_is_big_endian() {
        let mut buf = [0u8; 4];
        let mut offset = 0;
        marshal_u32(0x8000_0001, &mut buf, &mut offset).unwrap();
        // Most significant byte first.
        assert_eq!(buf[0], 0x80);
        assert_eq!(buf[3], 0x01);
    }

    #[test]
    fn round_trip_boundary_values() {
        for v in [0u32, 1, 0xFF, 0x0100, 0x0102_0304, 0xFFFF_FFFF] {
            let mut buf = [0u8; 4];
            let mut w = 0;
            marshal_u32(v, &mut buf, &mut w).unwrap();
            let mut r = 0;
            assert_eq!(unmarshal_u32(&buf, &mut r), Ok(v));
            assert_eq!(buf, be_bytes_oracle(v));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip_identity(v: u32, pad in 0usize..8) {
                let mut buf = vec![0u8; 4 + pad];
                let mut w = pad / 2;
                let at = w;
                marshal_u32(v, &mut buf, &mut w).unwrap();
                prop_assert_eq!(w, at + 4);
                let mut r = at;
                prop_assert_eq!(unmarshal_u32(&buf, &mut r), Ok(v));
                prop_assert_eq!(&buf[at..at + 4], &be_bytes_oracle(v));
            }

            // Frame: bytes outside [offset, offset+4) keep their canary.
            #[test]
            fn marshal_never_writes_outside_window(v: u32, at in 0usize..5) {
                let mut buf = [0xC5u8; 9];
                let mut offset = at;
                marshal_u32(v, &mut buf, &mut offset).unwrap();
                for (i, b) in buf.iter().enumerate() {
                    if !(at..at + 4).contains(&i) {
                        prop_assert_eq!(*b, 0xC5);
                    }
                }
            }
        }
    }
}
