import requests

BASE = 'https://hue-bridge.local/clip/v2'
HEADERS = {'hue-application-key': 'demo-app-key'}


def rename_room(room_id):
    url = f'{BASE}/resource/grouped_light/{room_id}'
    resp = requests.put(url, headers=HEADERS, json={'type': 'grouped_light', 'on': {'on': True}})
    return resp.json()
