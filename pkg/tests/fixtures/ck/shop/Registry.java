package shop;

import java.util.HashMap;
import java.util.Map;

public class Registry {
    private Map<String, Item> items = new HashMap<>();
    private int hits;
    private String owner;
    private Discount discount;

    public Item find(String key) {
        return items.get(key);
    }

    public void hit() {
        hits++;
    }

    public String owner() {
        return owner;
    }

    public Discount discount() {
        return discount;
    }
}
