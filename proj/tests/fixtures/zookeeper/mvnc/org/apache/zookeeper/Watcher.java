package org.apache.zookeeper;

public interface Watcher {

    void process(WatchedEvent event);

    enum WatcherType {
        Children(1),
        Data(2),
        Any(3);

        private final int intValue;

        WatcherType(int intValue) {
            this.intValue = intValue;
        }

        public int getIntValue() {
            return intValue;
        }
    }
}
