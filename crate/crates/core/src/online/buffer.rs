use std::collections::VecDeque;

use crate::space::Point;

#[derive(Debug, Clone)]
struct Slot {
    current: Point,
    previous: Point,
    y_current: Point,
    y_previous: Point,
}

/// Two-version store of the live receding-horizon iterates.
///
/// The update of `x_t` at stage `s` reads `x_{t−1}^{s−2}`, which is one
/// version older than the latest value of `x_{t−1}`. Each live stage slot
/// therefore keeps its most recent value (`current`) and the value before
/// the most recent update (`previous`), plus the same pair for the
/// extrapolated sequence `y` used by the accelerated variant.
///
/// Slot `t` is created at stage `t − W` and dropped once stage `t + 1` has
/// finished reading it, so at most `W + 2` slots are ever live. Stage 0 is
/// the fixed initial action and is never stored.
#[derive(Debug, Clone)]
pub struct HorizonBuffer {
    x0: Point,
    first: usize,
    slots: VecDeque<Slot>,
}

impl HorizonBuffer {
    pub fn new(x0: Point) -> Self {
        HorizonBuffer {
            x0,
            first: 1,
            slots: VecDeque::new(),
        }
    }

    /// Stage index one past the newest slot.
    pub fn next_stage(&self) -> usize {
        self.first + self.slots.len()
    }

    pub fn live(&self) -> usize {
        self.slots.len()
    }

    /// Creates the slot for stage `t` with initial value `value` (`y = x`).
    pub fn init(&mut self, t: usize, value: Point) {
        assert_eq!(t, self.next_stage(), "horizon buffer: slots must be created in stage order");
        self.slots.push_back(Slot {
            current: value.clone(),
            previous: value.clone(),
            y_current: value.clone(),
            y_previous: value,
        });
    }

    fn slot(&self, t: usize) -> &Slot {
        assert!(
            t >= self.first && t < self.next_stage(),
            "horizon buffer: stage {t} is not live ({}..{})",
            self.first,
            self.next_stage()
        );
        &self.slots[t - self.first]
    }

    pub fn current(&self, t: usize) -> &Point {
        if t == 0 {
            &self.x0
        } else {
            &self.slot(t).current
        }
    }

    pub fn previous(&self, t: usize) -> &Point {
        if t == 0 {
            &self.x0
        } else {
            &self.slot(t).previous
        }
    }

    pub fn y_current(&self, t: usize) -> &Point {
        if t == 0 {
            &self.x0
        } else {
            &self.slot(t).y_current
        }
    }

    pub fn y_previous(&self, t: usize) -> &Point {
        if t == 0 {
            &self.x0
        } else {
            &self.slot(t).y_previous
        }
    }

    /// Pushes a new version of `x_t` (and optionally `y_t`).
    pub fn update(&mut self, t: usize, x: Point, y: Option<Point>) {
        assert!(t >= 1);
        let first = self.first;
        let slot = &mut self.slots[t - first];
        slot.previous = std::mem::replace(&mut slot.current, x);
        if let Some(y) = y {
            slot.y_previous = std::mem::replace(&mut slot.y_current, y);
        }
    }

    /// Drops every slot with stage index below `t`.
    pub fn retire_before(&mut self, t: usize) {
        while self.first < t && !self.slots.is_empty() {
            self.slots.pop_front();
            self.first += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> Point {
        Point::from_element(1, v)
    }

    #[test]
    fn keeps_two_versions() {
        let mut buf = HorizonBuffer::new(p(-1.0));
        buf.init(1, p(0.0));
        buf.update(1, p(1.0), None);
        buf.update(1, p(2.0), Some(p(5.0)));
        assert_eq!(buf.current(1)[0], 2.0);
        assert_eq!(buf.previous(1)[0], 1.0);
        assert_eq!(buf.y_current(1)[0], 5.0);
        assert_eq!(buf.y_previous(1)[0], 0.0);
        assert_eq!(buf.current(0)[0], -1.0);
        assert_eq!(buf.previous(0)[0], -1.0);
    }

    #[test]
    fn retires_old_slots() {
        let mut buf = HorizonBuffer::new(p(0.0));
        for t in 1..=5 {
            buf.init(t, p(t as f64));
        }
        buf.retire_before(3);
        assert_eq!(buf.live(), 3);
        assert_eq!(buf.current(3)[0], 3.0);
        assert_eq!(buf.next_stage(), 6);
    }

    #[test]
    #[should_panic(expected = "not live")]
    fn reading_retired_slot_panics() {
        let mut buf = HorizonBuffer::new(p(0.0));
        buf.init(1, p(1.0));
        buf.init(2, p(2.0));
        buf.retire_before(2);
        buf.current(1);
    }
}
