fn main() {
    let code = mandel_arith::cli::dispatch(std::env::args_os());
    std::process::exit(code);
}
