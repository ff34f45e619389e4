//! Fetcher queue: highest priority first, FIFO among equals, with a seen set
//! that rejects any URL enqueued before and periodic aging against
//! starvation.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("priority {priority} for {url} is outside (0, 1]")]
pub struct PriorityOutOfRange {
    pub url: String,
    pub priority: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontierItem {
    pub url: String,
    pub priority: f64,
    pub seq: u64,
}

impl Eq for FrontierItem {}

impl Ord for FrontierItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for FrontierItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub struct Frontier {
    items: BinaryHeap<FrontierItem>,
    seen: HashSet<String>,
    insert_count: u64,
    aging_factor: f64,
    aging_interval: u64,
}

impl Default for Frontier {
    fn default() -> Self {
        Frontier::new(0.05, 100)
    }
}

impl Frontier {
    pub fn new(aging_factor: f64, aging_interval: u64) -> Self {
        Frontier {
            items: BinaryHeap::new(),
            seen: HashSet::new(),
            insert_count: 0,
            aging_factor,
            aging_interval: aging_interval.max(1),
        }
    }

    /// Returns `Ok(false)` for a URL that was enqueued before.
    pub fn enqueue(&mut self, url: &str, priority: f64) -> Result<bool, PriorityOutOfRange> {
        if !(priority > 0.0 && priority <= 1.0) {
            return Err(PriorityOutOfRange {
                url: url.to_string(),
                priority,
            });
        }
        if !self.seen.insert(url.to_string()) {
            return Ok(false);
        }
        self.items.push(FrontierItem {
            url: url.to_string(),
            priority,
            seq: self.insert_count,
        });
        self.insert_count += 1;
        if self.insert_count.is_multiple_of(self.aging_interval) {
            self.age();
        }
        Ok(true)
    }

    /// Adds the aging factor to every queued item whose result stays below 1.
    fn age(&mut self) {
        let factor = self.aging_factor;
        let mut items = std::mem::take(&mut self.items).into_vec();
        for item in &mut items {
            let aged = item.priority + factor;
            if aged < 1.0 {
                item.priority = aged;
            }
        }
        self.items = BinaryHeap::from(items);
    }

    pub fn dequeue(&mut self) -> Option<FrontierItem> {
        self.items.pop()
    }

    pub fn peek(&self) -> Option<&FrontierItem> {
        self.items.peek()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn has_seen(&self, url: &str) -> bool {
        self.seen.contains(url)
    }

    pub fn insert_count(&self) -> u64 {
        self.insert_count
    }

    /// Queued items in no particular order.
    pub fn items(&self) -> impl Iterator<Item = &FrontierItem> {
        self.items.iter()
    }
}
