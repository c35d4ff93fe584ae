use pforms::{FieldDescriptor, NeighborInput, RatFunc};

fn main() {
    let t0 = std::time::Instant::now();
    let desc = FieldDescriptor::new(5, &["a1", "a2", "a3", "a4", "d"]).unwrap();
    let gens: Vec<RatFunc> = (0..4).map(|i| RatFunc::variable(&desc, i).unwrap()).collect();
    let d = RatFunc::variable(&desc, 4).unwrap();
    let input = NeighborInput::new(&desc, gens, 3, d).unwrap();
    let report = pforms::splitting_pattern_neighbor(&input).unwrap();
    println!("dims: {:?}", report.dims);
    println!("elapsed: {:?}", t0.elapsed());
}
