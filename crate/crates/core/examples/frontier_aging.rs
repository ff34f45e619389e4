//! Shows the fetcher queue ordering and the aging step on every 100th insert.

use focuscrawl::crawl::Frontier;

fn main() {
    let mut f = Frontier::default();
    f.enqueue("http://seed.test/", 1.0).unwrap();
    f.enqueue("http://near.test/", 0.5).unwrap();
    f.enqueue("http://edge.test/", 0.97).unwrap();
    for i in 0..96 {
        f.enqueue(&format!("http://far.test/{i}"), 0.01).unwrap();
    }
    let show = |f: &Frontier, url: &str| f.items().find(|i| i.url == url).map(|i| i.priority);
    println!("before: near {:?} edge {:?}", show(&f, "http://near.test/"), show(&f, "http://edge.test/"));
    f.enqueue("http://last.test/", 0.2).unwrap();
    println!("after insert {}: near {:?} edge {:?}", f.insert_count(), show(&f, "http://near.test/"), show(&f, "http://edge.test/"));
    println!("re-enqueue of the seed accepted: {}", f.enqueue("http://seed.test/", 1.0).unwrap());
    for _ in 0..4 {
        let item = f.dequeue().unwrap();
        println!("dequeue {} at {:.2}", item.url, item.priority);
    }
}
