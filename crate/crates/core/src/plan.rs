use crate::error::{Result, TtpError};
use crate::instance::{CityId, Instance, ItemId};

/// Which items are collected, with exact aggregate weight and profit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CollectionPlan {
    picked: Vec<bool>,
    city_weight: Vec<u64>,
    total_weight: u64,
    total_profit: u64,
}

impl CollectionPlan {
    pub fn empty(inst: &Instance) -> Self {
        CollectionPlan {
            picked: vec![false; inst.num_items()],
            city_weight: vec![0; inst.num_cities()],
            total_weight: 0,
            total_profit: 0,
        }
    }

    pub fn from_items(inst: &Instance, items: &[ItemId]) -> Result<Self> {
        let mut plan = Self::empty(inst);
        for &i in items {
            if i >= inst.num_items() {
                return Err(TtpError::InvalidSolution(format!("item id {} out of range", i + 1)));
            }
            if plan.picked[i] {
                return Err(TtpError::InvalidSolution(format!("item {} listed twice", i + 1)));
            }
            plan.flip(inst, i);
        }
        Ok(plan)
    }

    #[inline]
    pub fn is_picked(&self, i: ItemId) -> bool {
        self.picked[i]
    }

    pub fn picked_items(&self) -> Vec<ItemId> {
        (0..self.picked.len()).filter(|&i| self.picked[i]).collect()
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn total_profit(&self) -> u64 {
        self.total_profit
    }

    /// Weight collected at city `c`.
    #[inline]
    pub fn city_weight(&self, c: CityId) -> u64 {
        self.city_weight[c]
    }

    pub fn is_feasible(&self, inst: &Instance) -> bool {
        self.total_weight <= inst.capacity()
    }

    /// Whether flipping item `i` keeps the knapsack constraint.
    #[inline]
    pub fn flip_is_feasible(&self, inst: &Instance, i: ItemId) -> bool {
        self.picked[i] || self.total_weight + inst.item(i).weight <= inst.capacity()
    }

    /// Toggles item `i`, updating the aggregates in constant time.
    pub fn flip(&mut self, inst: &Instance, i: ItemId) {
        let item = inst.item(i);
        if self.picked[i] {
            self.picked[i] = false;
            self.city_weight[item.city] -= item.weight;
            self.total_weight -= item.weight;
            self.total_profit -= item.profit;
        } else {
            self.picked[i] = true;
            self.city_weight[item.city] += item.weight;
            self.total_weight += item.weight;
            self.total_profit += item.profit;
        }
    }

    /// Picks `i` when it is uncollected and fits. Returns whether it changed.
    pub fn try_pick(&mut self, inst: &Instance, i: ItemId) -> bool {
        if self.picked[i] || self.total_weight + inst.item(i).weight > inst.capacity() {
            return false;
        }
        self.flip(inst, i);
        true
    }

    /// Unpicks `i` when it is collected. Returns whether it changed.
    pub fn unpick(&mut self, inst: &Instance, i: ItemId) -> bool {
        if !self.picked[i] {
            return false;
        }
        self.flip(inst, i);
        true
    }
}
