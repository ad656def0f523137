use rand::{Error as RandError, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A reproducible random stream indexed by `(seed, stream_id)`.
///
/// The seed fixes a ChaCha key and the stream id selects an independent keystream, so
/// replica `i` draws the same numbers no matter which thread runs it or in what order.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        RngStream { seed, stream_id, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A stream for a sub-task of this one, e.g. the second walk of a replica.
    pub fn substream(&self, k: u64) -> Self {
        let mixed = self.stream_id.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ k.rotate_left(32) ^ 0xD1B5_4A32_D192_ED03;
        RngStream::new(self.seed ^ mixed, self.stream_id.wrapping_add(k))
    }

    /// Uniform integer in `0..n` by multiply-and-reject, `n > 0`.
    #[inline]
    pub fn below(&mut self, n: u32) -> u32 {
        debug_assert!(n > 0);
        let mut m = (self.inner.next_u32() as u64) * (n as u64);
        if (m as u32) < n {
            // only now can the draw fall in the rejected zone
            let zone = n.wrapping_neg() % n;
            while (m as u32) < zone {
                m = (self.inner.next_u32() as u64) * (n as u64);
            }
        }
        (m >> 32) as u32
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), RandError> {
        self.inner.try_fill_bytes(dest)
    }
}
