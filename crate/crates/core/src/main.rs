fn main() { std::process::exit(causal_ground::cli::main()) }
