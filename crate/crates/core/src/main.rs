fn main() {
    secant::cli::main();
}
