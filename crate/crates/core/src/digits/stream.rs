//! Pull-based digit streams.

use super::{
    check_base, digits_in_base, rational_digits, ConcatDigits, ConstantSpec, DigitBlock, DigitError,
};

/// Anything that hands out successive, contiguous digit blocks.
pub trait DigitSource {
    fn base(&self) -> u32;

    /// The next block; an empty block means the source is finished.
    fn next_block(&mut self) -> Result<DigitBlock, DigitError>;
}

enum Producer {
    /// Recomputes the whole prefix at geometrically growing lengths.
    Recompute {
        constant: ConstantSpec,
        computed: Vec<u8>,
    },
    /// Emits digits one at a time (rationals, native-base concatenations).
    Direct(Box<dyn Iterator<Item = u8> + Send>),
}

/// Unbounded stream of the fractional digits of a constant.
///
/// A stream is single-consumer; independent streams over the same constant
/// and base always produce identical digits.
pub struct DigitStream {
    constant: ConstantSpec,
    base: u32,
    block_size: usize,
    cursor: u64,
    producer: Producer,
}

/// Opens a stream emitting `block_size` digits per pull.
pub fn open_stream(
    constant: &ConstantSpec,
    base: u32,
    block_size: usize,
) -> Result<DigitStream, DigitError> {
    check_base(base)?;
    constant.validate()?;
    if block_size == 0 {
        return Err(DigitError::InvalidCount);
    }
    let producer = match *constant {
        ConstantSpec::Rational { p, q } => Producer::Direct(Box::new(rational_digits(p, q, base))),
        _ if constant.native_base() == Some(base) => Producer::Direct(Box::new(
            ConcatDigits::new(constant).expect("concatenation constant"),
        )),
        _ => Producer::Recompute {
            constant: constant.clone(),
            computed: Vec::new(),
        },
    };
    Ok(DigitStream {
        constant: constant.clone(),
        base,
        block_size,
        cursor: 1,
        producer,
    })
}

impl DigitStream {
    pub fn constant(&self) -> &ConstantSpec {
        &self.constant
    }

    /// Position of the next digit to be emitted.
    pub fn cursor(&self) -> u64 {
        self.cursor
    }
}

impl DigitSource for DigitStream {
    fn base(&self) -> u32 {
        self.base
    }

    fn next_block(&mut self) -> Result<DigitBlock, DigitError> {
        let start = self.cursor;
        let digits = match &mut self.producer {
            Producer::Direct(iter) => iter.by_ref().take(self.block_size).collect(),
            Producer::Recompute { constant, computed } => {
                let from = (start - 1) as usize;
                let need = from + self.block_size;
                if computed.len() < need {
                    let target = need.max(2 * computed.len()).max(256);
                    *computed = digits_in_base(constant, self.base, target)?.digits;
                }
                computed[from..need].to_vec()
            }
        };
        self.cursor += self.block_size as u64;
        Ok(DigitBlock {
            base: self.base,
            start,
            digits,
        })
    }
}

/// A finite in-memory digit sequence served in blocks.
#[derive(Debug, Clone)]
pub struct SliceSource {
    block: DigitBlock,
    block_size: usize,
    offset: usize,
}

impl SliceSource {
    pub fn new(block: DigitBlock, block_size: usize) -> Self {
        SliceSource {
            block,
            block_size: block_size.max(1),
            offset: 0,
        }
    }
}

impl DigitSource for SliceSource {
    fn base(&self) -> u32 {
        self.block.base
    }

    fn next_block(&mut self) -> Result<DigitBlock, DigitError> {
        let end = (self.offset + self.block_size).min(self.block.len());
        let out = DigitBlock {
            base: self.block.base,
            start: self.block.start + self.offset as u64,
            digits: self.block.digits[self.offset..end].to_vec(),
        };
        self.offset = end;
        Ok(out)
    }
}
