/// Binary max-heap of variables keyed by an external activity array.
#[derive(Debug, Default)]
pub(super) struct VarHeap {
    heap: Vec<u32>,
    /// Position of each variable in `heap`, or `usize::MAX` when absent.
    index: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl VarHeap {
    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn at(&self, pos: usize) -> u32 {
        self.heap[pos]
    }

    pub fn contains(&self, v: u32) -> bool {
        self.index.get(v as usize).is_some_and(|&i| i != ABSENT)
    }

    pub fn insert(&mut self, v: u32, activity: &[f64]) {
        if self.index.len() <= v as usize {
            self.index.resize(v as usize + 1, ABSENT);
        }
        debug_assert!(!self.contains(v));
        self.index[v as usize] = self.heap.len();
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, activity);
    }

    pub fn increase(&mut self, v: u32, activity: &[f64]) {
        let pos = self.index[v as usize];
        self.sift_up(pos, activity);
    }

    pub fn pop_max(&mut self, activity: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.index[top as usize] = ABSENT;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.index[last as usize] = 0;
            self.sift_down(0, activity);
        }
        Some(top)
    }

    fn better(a: u32, b: u32, activity: &[f64]) -> bool {
        let (x, y) = (activity[a as usize], activity[b as usize]);
        x > y || (x == y && a < b)
    }

    fn sift_up(&mut self, mut pos: usize, activity: &[f64]) {
        let v = self.heap[pos];
        while pos > 0 {
            let parent = (pos - 1) / 2;
            if !Self::better(v, self.heap[parent], activity) {
                break;
            }
            self.heap[pos] = self.heap[parent];
            self.index[self.heap[pos] as usize] = pos;
            pos = parent;
        }
        self.heap[pos] = v;
        self.index[v as usize] = pos;
    }

    fn sift_down(&mut self, mut pos: usize, activity: &[f64]) {
        let v = self.heap[pos];
        loop {
            let left = 2 * pos + 1;
            if left >= self.heap.len() {
                break;
            }
            let right = left + 1;
            let child = if right < self.heap.len() && Self::better(self.heap[right], self.heap[left], activity) {
                right
            } else {
                left
            };
            if !Self::better(self.heap[child], v, activity) {
                break;
            }
            self.heap[pos] = self.heap[child];
            self.index[self.heap[pos] as usize] = pos;
            pos = child;
        }
        self.heap[pos] = v;
        self.index[v as usize] = pos;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pops_in_activity_order() {
        let activity = vec![0.5, 3.0, 1.0, 3.0, 0.0];
        let mut heap = VarHeap::default();
        for v in 0..5 {
            heap.insert(v, &activity);
        }
        let order: Vec<u32> = std::iter::from_fn(|| heap.pop_max(&activity)).collect();
        assert_eq!(order, [1, 3, 2, 0, 4]);
    }
}
