fn main() {
    println!("qflag");
}
