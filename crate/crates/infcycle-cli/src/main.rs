fn main() {
    println!("infcycle");
}
