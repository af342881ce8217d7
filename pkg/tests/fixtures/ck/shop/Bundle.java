package shop;

import java.util.ArrayList;
import java.util.List;

public class Bundle extends Item {
    private final List<Item> parts = new ArrayList<>();

    public Bundle(String name) {
        super(name, 0.0);
    }

    public void add(Item part) {
        parts.add(part);
    }

    public double price() {
        double total = 0;
        for (Item p : parts) {
            total += p.price();
        }
        return total > 100 ? total * 0.9 : total;
    }
}
