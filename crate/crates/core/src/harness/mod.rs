//! Codecs, seeded generators and the benchmark runner.

pub mod bench;
pub mod codec;
pub mod generate;
pub mod rng;

pub use bench::{parse_algorithm, run_algorithm, run_bench, Algorithm, BenchConfig, BenchError, RunReport, RunRow};
pub use codec::{read_instance, read_schedule, write_instance, write_schedule, CodecError};
pub use generate::{gen_mixed, gen_random, gen_tight, generate, Family, GenError, GeneratorSpec};
pub use rng::SplitMix64;
